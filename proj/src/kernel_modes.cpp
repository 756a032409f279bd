#include "kinet/kernel_modes.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

extern "C" {
void zgemm_(const char* transa, const char* transb, const int* m, const int* n, const int* k,
            const void* alpha, const void* a, const int* lda, const void* b, const int* ldb,
            const void* beta, void* c, const int* ldc);
}

namespace kinet {

std::string KernelId::describe() const {
    char buf[96];
    if (kind == Kind::maxwell)
        std::snprintf(buf, sizeof buf, "maxwell;C=%.17g", C);
    else
        std::snprintf(buf, sizeof buf, "vhs;C=%.17g;alpha=%.17g", C, alpha);
    return buf;
}

namespace {

// (e^{iz} - 1)/(iz), the r-integral of e^{i r lambda} over [0,1] scaled
cplx expc(double z) {
    if (std::abs(z) < 1e-6) return cplx{1.0 - z * z / 6.0, 0.5 * z};
    return (std::polar(1.0, z) - cplx{1.0, 0.0}) / cplx{0.0, z};
}

double sinc(double z) {
    if (std::abs(z) < 1e-6) return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

// Gauss-Legendre nodes/weights on [0, 1]
void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        double p0 = 0.0, p1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            const double dp = n * (t * p0 - p1) / (t * t - 1.0);
            const double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
        }
        const double dp = n * (t * p0 - p1) / (t * t - 1.0);
        x[i] = 0.5 * (1.0 - t);
        x[n - 1 - i] = 0.5 * (1.0 + t);
        w[i] = w[n - 1 - i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
}

struct AngleTable {
    std::vector<double> c, s;  // cos/sin phi_j, antipodal halves negated bit-exactly
    double weight;
    explicit AngleTable(int n_phi) : c(n_phi), s(n_phi), weight(2.0 * pi / n_phi) {
        const int half = n_phi / 2;
        for (int j = 0; j < half; ++j) {
            c[j] = std::cos(2.0 * pi * j / n_phi);
            s[j] = std::sin(2.0 * pi * j / n_phi);
            c[j + half] = -c[j];
            s[j + half] = -s[j];
        }
    }
};

struct QuadraturePlan {
    int n_phi, n_r, n_t;
};

QuadraturePlan plan_for(int N, const KernelId& kernel, double R, double level) {
    QuadraturePlan q;
    // the phi integrand is a product of two oscillatory factors with angular
    // bandwidths ~ R|l| and ~ R|m|, so the trapezoid needs to clear their sum
    const double bandwidth = 2.0 * std::sqrt(2.0) * R * N + 24.0;
    q.n_phi = 2 * static_cast<int>(std::ceil(level * bandwidth / 2.0));
    if (kernel.kind == KernelId::Kind::maxwell) {
        q.n_r = 0;  // exact closed-form radial/transversal integrals
        q.n_t = 0;
    } else {
        q.n_r = std::max(16, static_cast<int>(std::ceil(level * (0.5 * std::sqrt(2.0) * R * N + 16.0))));
        q.n_t = q.n_r;
    }
    return q;
}

// Fill the separated quadrature factors (column-major count x terms) for one
// plan.  beta(l,m) = sum_j F[l + j*count] * G[m + j*count].
void build_factors(const ModeBox& modes, const KernelId& kernel, double R, const QuadraturePlan& q,
                   std::vector<cplx>& F, std::vector<cplx>& G, std::size_t& terms) {
    const std::size_t M = modes.count();
    AngleTable ang(q.n_phi);

    // per-mode integer components
    std::vector<int> k1(M), k2(M);
    {
        int k[2];
        for (std::size_t i = 0; i < M; ++i) {
            modes.unflatten(i, k);
            k1[i] = k[0];
            k2[i] = k[1];
        }
    }

    if (kernel.kind == KernelId::Kind::maxwell) {
        terms = static_cast<std::size_t>(q.n_phi);
        F.assign(M * terms, cplx{});
        G.assign(M * terms, cplx{});
        const double bt = 2.0 * kernel.C;  // Btilde = 2^(d-1) B, d = 2
        for (int j = 0; j < q.n_phi; ++j) {
            cplx* Fc = F.data() + static_cast<std::size_t>(j) * M;
            cplx* Gc = G.data() + static_cast<std::size_t>(j) * M;
            const double wf = ang.weight * bt * R;  // r-integral scale folded into F
            for (std::size_t i = 0; i < M; ++i) {
                const double lam = k1[i] * ang.c[j] + k2[i] * ang.s[j];       // l . xhat
                const double mu = -k1[i] * ang.s[j] + k2[i] * ang.c[j];       // m . xhat_perp
                Fc[i] = wf * expc(R * lam);
                Gc[i] = cplx{2.0 * R * sinc(R * mu), 0.0};
            }
        }
        return;
    }

    // VHS: t-integral couples to r through Btilde = 2 C (r^2+t^2)^(alpha/2)
    std::vector<double> xr, wr, xt, wt;
    gauss_legendre01(q.n_r, xr, wr);
    gauss_legendre01(q.n_t, xt, wt);
    terms = static_cast<std::size_t>(q.n_phi) * q.n_r;
    F.assign(M * terms, cplx{});
    G.assign(M * terms, cplx{});
    for (int j = 0; j < q.n_phi; ++j) {
        for (int qi = 0; qi < q.n_r; ++qi) {
            const double r = R * xr[qi];
            const double wrq = R * wr[qi] * ang.weight;
            cplx* Fc = F.data() + (static_cast<std::size_t>(j) * q.n_r + qi) * M;
            cplx* Gc = G.data() + (static_cast<std::size_t>(j) * q.n_r + qi) * M;
            for (std::size_t i = 0; i < M; ++i) {
                const double lam = k1[i] * ang.c[j] + k2[i] * ang.s[j];
                const double mu = -k1[i] * ang.s[j] + k2[i] * ang.c[j];
                Fc[i] = wrq * std::polar(1.0, r * lam);
                // 2 int_0^R 2C (r^2+t^2)^(a/2) cos(t mu) dt, even in t
                double tint = 0.0;
                for (int si = 0; si < q.n_t; ++si) {
                    const double t = R * xt[si];
                    tint += R * wt[si] * std::pow(r * r + t * t, 0.5 * kernel.alpha) * std::cos(t * mu);
                }
                Gc[i] = cplx{2.0 * 2.0 * kernel.C * tint, 0.0};
            }
        }
    }
}

// direct (non-separated) evaluation of one beta(l,m); used by the self-check
cplx beta_single(const KernelId& kernel, double R, const QuadraturePlan& q, int l1, int l2, int m1,
                 int m2) {
    AngleTable ang(q.n_phi);
    cplx acc{0.0, 0.0};
    if (kernel.kind == KernelId::Kind::maxwell) {
        const double bt = 2.0 * kernel.C;
        for (int j = 0; j < q.n_phi; ++j) {
            const double lam = l1 * ang.c[j] + l2 * ang.s[j];
            const double mu = -m1 * ang.s[j] + m2 * ang.c[j];
            acc += ang.weight * bt * R * expc(R * lam) * (2.0 * R * sinc(R * mu));
        }
        return acc;
    }
    std::vector<double> xr, wr, xt, wt;
    gauss_legendre01(q.n_r, xr, wr);
    gauss_legendre01(q.n_t, xt, wt);
    for (int j = 0; j < q.n_phi; ++j) {
        const double lam = l1 * ang.c[j] + l2 * ang.s[j];
        const double mu = -m1 * ang.s[j] + m2 * ang.c[j];
        for (int qi = 0; qi < q.n_r; ++qi) {
            const double r = R * xr[qi];
            double tint = 0.0;
            for (int si = 0; si < q.n_t; ++si) {
                const double t = R * xt[si];
                tint += R * wt[si] * std::pow(r * r + t * t, 0.5 * kernel.alpha) * std::cos(t * mu);
            }
            acc += ang.weight * R * wr[qi] * std::polar(1.0, r * lam) *
                   (4.0 * kernel.C * tint);
        }
    }
    return acc;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

constexpr std::size_t kBetaHatMaterializeLimit = 8'000'000;

} // namespace

std::string kernel_cache_filename(int N, const KernelId& kernel, double R, double level) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "d=2;N=%d;R=%.17g;level=%.17g;%s", N, R, level,
                  kernel.describe().c_str());
    char name[96];
    std::snprintf(name, sizeof name, "kmodes_N%d_%016llx.kkm", N,
                  static_cast<unsigned long long>(fnv1a(buf)));
    return name;
}

KernelModes compute_kernel_modes(const VelocityGrid& grid, const KernelId& kernel, double R,
                                 double quadrature_level, const std::string& cache_dir) {
    if (grid.dim() != 2)
        throw unsupported_dimension_error("compute_kernel_modes: only d = 2 is supported");
    if (!(R > 0.0) || R > pi + 1e-12)
        throw invalid_parameter_error("compute_kernel_modes: R must lie in (0, pi]");
    if (!(quadrature_level >= 1.0))
        throw invalid_parameter_error("compute_kernel_modes: quadrature_level must be >= 1");

    const int N = grid.n_per_dim() / 2 - 1;
    std::string cache_path;
    if (!cache_dir.empty()) {
        cache_path = cache_dir + "/" + kernel_cache_filename(N, kernel, R, quadrature_level);
        if (std::filesystem::exists(cache_path)) {
            KernelModes km = read_kernel_modes(cache_path);
            if (km.modes.N == N && km.kernel == kernel && km.trunc_radius == R &&
                km.level == quadrature_level)
                return km;
        }
    }

    KernelModes km;
    km.modes = ModeBox{2, N};
    km.kernel = kernel;
    km.trunc_radius = R;
    km.level = quadrature_level;
    const QuadraturePlan q = plan_for(N, kernel, R, quadrature_level);
    km.n_phi = q.n_phi;
    km.n_r = q.n_r;
    km.n_t = q.n_t;

    build_factors(km.modes, kernel, R, q, km.sep_f, km.sep_g, km.sep_terms);

    // beta = F G^T as one GEMM; computing G F^T column-major lands the result
    // in our row-major (l, m) layout directly.
    const int M = static_cast<int>(km.count());
    const int T = static_cast<int>(km.sep_terms);
    km.beta.assign(static_cast<std::size_t>(M) * M, cplx{});
    const cplx one{1.0, 0.0}, zero{0.0, 0.0};
    zgemm_("N", "T", &M, &M, &T, &one, km.sep_g.data(), &M, km.sep_f.data(), &M, &zero,
           km.beta.data(), &M);

    km.diag.resize(km.count());
    for (std::size_t m = 0; m < km.count(); ++m) km.diag[m] = km.beta[m * km.count() + m];

    if (km.beta.size() <= kBetaHatMaterializeLimit) {
        km.beta_hat.resize(km.beta.size());
        for (std::size_t l = 0; l < km.count(); ++l)
            for (std::size_t m = 0; m < km.count(); ++m)
                km.beta_hat[l * km.count() + m] = km.beta[l * km.count() + m] - km.diag[m];
    }

    // sampled level-refinement self-check
    {
        QuadraturePlan qf = plan_for(N, kernel, R, quadrature_level * 1.5 + 0.5);
        std::vector<std::pair<int, int>> sample = {{0, 0}, {N, 0}, {0, N}, {-N, N}, {N, N}, {-N, -N}};
        std::mt19937_64 rng(12345);
        std::uniform_int_distribution<int> pick(-N, N);
        for (int i = 0; i < 6; ++i) sample.emplace_back(pick(rng), pick(rng));
        double scale = 0.0, err = 0.0;
        for (const auto& [l1, l2] : sample) {
            for (const auto& [m1, m2] : sample) {
                const cplx fine = beta_single(kernel, R, qf, l1, l2, m1, m2);
                int l[2] = {l1, l2}, m[2] = {m1, m2};
                const cplx got = km.beta[km.modes.index(l) * km.count() + km.modes.index(m)];
                scale = std::max(scale, std::abs(fine));
                err = std::max(err, std::abs(got - fine));
            }
        }
        km.self_check_error = scale > 0.0 ? err / scale : err;
        if (km.self_check_error > 1e-6)
            std::fprintf(stderr,
                         "kinet: kernel-mode quadrature level %.3g may be too low "
                         "(self-check drift %.3e)\n",
                         quadrature_level, km.self_check_error);
    }

    if (!cache_path.empty()) {
        std::filesystem::create_directories(cache_dir);
        write_kernel_modes(km, cache_path);
    }
    return km;
}

namespace {

template <class T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw io_error("kernel-mode file truncated");
    return v;
}
void put_vec(std::ofstream& os, const std::vector<cplx>& v) {
    put(os, static_cast<std::uint64_t>(v.size()));
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(cplx)));
}
std::vector<cplx> get_vec(std::ifstream& is) {
    const auto n = get<std::uint64_t>(is);
    std::vector<cplx> v(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(cplx)));
    if (!is) throw io_error("kernel-mode file truncated");
    return v;
}

static_assert(std::endian::native == std::endian::little,
              "kernel-mode cache format is little-endian");

} // namespace

void write_kernel_modes(const KernelModes& km, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open " + path + " for writing");
    os.write("KKM1", 4);
    put(os, static_cast<std::int32_t>(km.modes.dim));
    put(os, static_cast<std::int32_t>(km.modes.N));
    put(os, static_cast<std::int32_t>(km.kernel.kind));
    put(os, km.kernel.C);
    put(os, km.kernel.alpha);
    put(os, km.trunc_radius);
    put(os, km.level);
    put(os, static_cast<std::int32_t>(km.n_phi));
    put(os, static_cast<std::int32_t>(km.n_r));
    put(os, static_cast<std::int32_t>(km.n_t));
    put(os, static_cast<std::uint64_t>(km.sep_terms));
    put(os, km.self_check_error);
    put_vec(os, km.beta);
    put_vec(os, km.diag);
    put_vec(os, km.sep_f);
    put_vec(os, km.sep_g);
    if (!os) throw io_error("write failed: " + path);
}

KernelModes read_kernel_modes(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != "KKM1")
        throw io_error(path + ": bad magic, not a kernel-mode file");
    KernelModes km;
    km.modes.dim = get<std::int32_t>(is);
    km.modes.N = get<std::int32_t>(is);
    km.kernel.kind = static_cast<KernelId::Kind>(get<std::int32_t>(is));
    km.kernel.C = get<double>(is);
    km.kernel.alpha = get<double>(is);
    km.trunc_radius = get<double>(is);
    km.level = get<double>(is);
    km.n_phi = get<std::int32_t>(is);
    km.n_r = get<std::int32_t>(is);
    km.n_t = get<std::int32_t>(is);
    km.sep_terms = get<std::uint64_t>(is);
    km.self_check_error = get<double>(is);
    km.beta = get_vec(is);
    km.diag = get_vec(is);
    km.sep_f = get_vec(is);
    km.sep_g = get_vec(is);
    if (km.beta.size() != km.count() * km.count() || km.diag.size() != km.count())
        throw io_error(path + ": inconsistent table sizes");
    if (km.beta.size() <= kBetaHatMaterializeLimit) {
        km.beta_hat.resize(km.beta.size());
        for (std::size_t l = 0; l < km.count(); ++l)
            for (std::size_t m = 0; m < km.count(); ++m)
                km.beta_hat[l * km.count() + m] = km.beta[l * km.count() + m] - km.diag[m];
    }
    return km;
}

} // namespace kinet
