#include "vortexspec/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "vortexspec/linalg.hpp"
#include "vortexspec/profiles.hpp"

namespace vortex {

namespace pf = profiles;

namespace {

// Runs fn(i) for i in [0, n) on a small pool; fn writes only its own slot.
void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn) {
  size_t w = workers > 0 ? static_cast<size_t>(workers)
                         : std::max(1u, std::thread::hardware_concurrency());
  w = std::min(w, n);
  if (w <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  for (size_t t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(m);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

double beta_of(int k, double alpha) { return k * alpha / (8.0 * kPi); }

double unitary_norm(const RadialGrid& g, const MatrixXcd& M) {
  return linalg::norm2(unitary_frame(g, M));
}

AssemblyOptions symmetric() {
  AssemblyOptions o;
  o.symmetrize = true;
  return o;
}

OperatorMatrix zhat(const GridPtr& g, int k) {
  return k == 1 ? assemble_Z1_hat(g, symmetric()) : assemble_Zk_hat(g, k, symmetric());
}

OperatorMatrix lhat(const GridPtr& g, int k, double alpha) {
  return assemble_Lhat(g, {k, alpha}, k == 1 ? LhatKind::K1 : LhatKind::KGeneral, symmetric());
}

}  // namespace

std::vector<double> default_alpha_grid() { return {100, 178, 316, 562, 1000, 1778, 3162}; }

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_power_law: need two aligned points");
  const double n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("fit_power_law: non-positive data");
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double u = std::log(x[i]) - mx, v = std::log(y[i]) - my;
    sxx += u * u;
    sxy += u * v;
    syy += v * v;
  }
  PowerFit f;
  f.exponent = sxy / sxx;
  f.log_prefactor = my - f.exponent * mx;
  f.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

std::vector<size_t> upper_half(const std::vector<double>& x) {
  if (x.empty()) return {};
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double mid = 0.5 * (std::log(*lo) + std::log(*hi));
  // grids are rounded quarter-decade points: 562 stands for 10^{2.75}
  const double slack = 1e-3 * std::log(10.0);
  std::vector<size_t> idx;
  for (size_t i = 0; i < x.size(); ++i)
    if (std::log(x[i]) >= mid - slack) idx.push_back(i);
  return idx;
}

bool SweepResult::ordering_holds(double tol) const {
  for (size_t i = 0; i < alphas.size(); ++i)
    if (!(sigma[i] >= psi[i] - tol && psi[i] >= 1.0 - tol)) return false;
  return true;
}

void validate_alpha_grid(const std::vector<double>& alphas, double alpha0) {
  if (alphas.size() < 2) throw std::invalid_argument("alpha_grid: need at least two values");
  for (size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] >= alpha0))
      throw std::invalid_argument("alpha_grid: values must be >= alpha0 = " + std::to_string(alpha0));
    if (i > 0 && !(alphas[i] > alphas[i - 1]))
      throw std::invalid_argument("alpha_grid: values must be increasing");
  }
  // 3162/100 is 1.49996 decades
  if (std::log10(alphas.back() / alphas.front()) < 1.5 - 1e-3)
    throw std::invalid_argument("alpha_grid: must span at least 1.5 decades");
}

SweepResult run_sweep(const SweepConfig& cfg) {
  validate_alpha_grid(cfg.alphas, cfg.alpha0);
  if (cfg.k_max < 2) throw std::invalid_argument("k_max: must be >= 2");
  const size_t na = cfg.alphas.size(), nk = cfg.k_max;
  SweepResult out;
  out.alphas = cfg.alphas;
  out.modes.assign(na, std::vector<ModeSolve>(nk));
  parallel_for(na * nk, cfg.workers, [&](size_t c) {
    const size_t a = c / nk, k = c % nk + 1;
    out.modes[a][k - 1] = solve_mode(static_cast<int>(k), cfg.alphas[a], cfg.policy, true,
                                     cfg.check_robust, cfg.robust_tol);
  });

  for (size_t a = 0; a < na; ++a) {
    const auto& ms = out.modes[a];
    double s = std::numeric_limits<double>::infinity(), p = s;
    int ks = 0, kp = 0;
    bool flag = false;
    for (const auto& m : ms) {
      if (-m.abscissa < s) {
        s = -m.abscissa;
        ks = m.k;
      }
      if (m.psi < p) {
        p = m.psi;
        kp = m.k;
      }
      if (!m.robust) flag = true;
      if (!m.psi_refined)
        out.warnings.push_back("alpha=" + std::to_string(cfg.alphas[a]) + " k=" + std::to_string(m.k) +
                               ": resolvent bracket not refined");
    }
    // -abscissa nondecreasing in k for k >= 2
    for (size_t k = 2; k < ms.size(); ++k)
      if (-ms[k].abscissa < -ms[k - 1].abscissa - cfg.monotone_tol) ++out.monotone_violations;
    if (ks == cfg.k_max)
      out.warnings.push_back("alpha=" + std::to_string(cfg.alphas[a]) +
                             ": spectral bound attained at k_max; mode truncation suspect");
    if (flag)
      out.warnings.push_back("alpha=" + std::to_string(cfg.alphas[a]) +
                             ": grid-robustness gate failed, excluded from fits");
    out.sigma.push_back(s);
    out.psi.push_back(p);
    out.per_mode_argmax.push_back(ks);
    out.psi_argmin.push_back(kp);
    out.flagged.push_back(flag);
  }

  std::vector<double> fa, fs, fp;
  for (size_t i : upper_half(cfg.alphas)) {
    if (out.flagged[i]) continue;
    fa.push_back(cfg.alphas[i]);
    fs.push_back(out.sigma[i]);
    fp.push_back(out.psi[i]);
  }
  out.fit_alphas = fa;
  if (fa.size() >= 2) {
    out.sigma_exponent = fit_power_law(fa, fs).exponent;
    out.psi_exponent = fit_power_law(fa, fp).exponent;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (size_t i = 0; i < fa.size(); ++i) {
      lo = std::min(lo, fs[i] / std::sqrt(fa[i]));
      hi = std::max(hi, fs[i] / std::sqrt(fa[i]));
    }
    out.sigma_prefactor_band = {lo, hi};
  } else {
    out.sigma_exponent = out.psi_exponent = std::numeric_limits<double>::quiet_NaN();
    out.warnings.push_back("fewer than two unflagged alphas in the fit window");
  }
  return out;
}

double resolvent_gap(int k, double alpha, const GridPolicy& policy) {
  if (k < 1) throw std::invalid_argument("resolvent_gap: k must be >= 1");
  const GridPtr g = build_grid(policy.for_beta(beta_of(k, alpha)));
  const MatrixXcd Li = linalg::inverse(lhat(g, k, alpha).entries);
  const MatrixXcd Zi = linalg::inverse(zhat(g, k).entries);
  return unitary_norm(*g, Li - Zi);
}

GapDecayResult resolvent_gap_decay(const std::vector<double>& alphas, int k,
                                   const GridPolicy& policy, int workers) {
  validate_alpha_grid(alphas, 0.0);
  GapDecayResult out;
  out.k = k;
  out.alphas = alphas;
  out.d.assign(alphas.size(), 0.0);
  for (double a : alphas) out.betas.push_back(beta_of(k, a));
  parallel_for(alphas.size(), workers,
               [&](size_t i) { out.d[i] = resolvent_gap(k, alphas[i], policy); });
  for (size_t i = 0; i < alphas.size(); ++i)
    out.C = std::max(out.C, out.d[i] * std::pow(out.betas[i], 0.1));
  std::vector<double> fb, fd;
  for (size_t i : upper_half(alphas)) {
    out.fit_alphas.push_back(alphas[i]);
    fb.push_back(out.betas[i]);
    fd.push_back(out.d[i]);
  }
  out.exponent = fit_power_law(fb, fd).exponent;
  out.monotone = true;
  for (size_t i = 1; i < fd.size(); ++i)
    if (!(fd[i] < fd[i - 1])) out.monotone = false;
  out.passed = out.exponent <= -0.08 && out.monotone;
  return out;
}

CoercivityReport coercivity_table(const std::vector<double>& alphas, const std::vector<int>& k_list,
                                  const GridPolicy& policy, std::uint64_t seed, int n_random,
                                  int workers) {
  if (alphas.empty() || k_list.empty())
    throw std::invalid_argument("coercivity_table: empty alpha or k list");
  for (int k : k_list)
    if (k < 1) throw std::invalid_argument("coercivity_table: k must be >= 1");
  const size_t nc = alphas.size() * k_list.size();
  std::vector<std::vector<CoercivityRow>> cells(nc), groups(nc);

  parallel_for(nc, workers, [&](size_t c) {
    const double alpha = alphas[c / k_list.size()];
    const int k = k_list[c % k_list.size()];
    const double b = beta_of(k, alpha);
    const GridPtr g = build_grid(policy.for_beta(b));
    const RadialGrid& G = *g;
    const VectorXd& r = G.nodes();
    const MatrixXcd D1 = G.d1().cast<cplx>(), D2 = G.d2().cast<cplx>();
    const MatrixXcd Zi = linalg::inverse(zhat(g, k).entries);
    const MatrixXcd Li = linalg::inverse(lhat(g, k, alpha).entries);
    const VectorXd mr = r.array().min(std::pow(b, 0.25));
    const VectorXd r2 = r.array().square(), rm1 = r.array().inverse(), rm2 = rm1.array().square();
    auto& rows = cells[c];
    auto add = [&](const std::string& q, double v) { rows.push_back({k, alpha, q, v}); };
    const double kk = static_cast<double>(k) * k;

    const double d2Z = unitary_norm(G, D2 * Zi);
    const double r2Z = unitary_norm(G, r2.cast<cplx>().asDiagonal() * Zi);
    const double rm2Z = unitary_norm(G, rm2.cast<cplx>().asDiagonal() * Zi);
    const double d1L = unitary_norm(G, D1 * Li);
    const double rm1L = unitary_norm(G, rm1.cast<cplx>().asDiagonal() * Li);
    const double L = unitary_norm(G, Li);
    const double mL = unitary_norm(G, mr.cast<cplx>().asDiagonal() * Li);
    const double Lm = unitary_norm(G, Li * mr.cast<cplx>().asDiagonal());
    const double mLm = unitary_norm(G, mr.cast<cplx>().asDiagonal() * Li * mr.cast<cplx>().asDiagonal());
    add("d2_Zinv", d2Z);
    add("r2_Zinv", r2Z);
    add("d1_Linv", d1L);
    add("rm1_Linv", rm1L);
    add("Linv", L);
    add("m_Linv", mL);
    add("Linv_m", Lm);
    add("m_Linv_m", mLm);
    auto& grp = groups[c];
    if (k == 1) {
      add("rm2_Zinv", rm2Z);
      grp.push_back({k, alpha, "P54a", d2Z + r2Z + rm2Z});
      grp.push_back({k, alpha, "P54b", d1L + rm1L + L + mL});
      grp.push_back({k, alpha, "P54c", Lm + mLm});
    } else {
      const double Z = unitary_norm(G, Zi);
      add("k2_rm2_Zinv", kk * rm2Z);
      add("k_Zinv", k * Z);
      // k^2 ||K_k f|| / ||r^2 f|| over smoothed random f
      const MatrixXd K = kernel_matrix(g, k).entries.real();
      const VectorXd& w = G.weights();
      auto nrm = [&](const VectorXd& v) { return std::sqrt((w.array() * v.array().square()).sum()); };
      SmoothRandom src(G, seed + static_cast<std::uint64_t>(k));
      double sup = 0.0;
      for (int s = 0; s < n_random; ++s) {
        const VectorXd f = src.real_sample();
        sup = std::max(sup, kk * nrm(K * f) / nrm(r2.cwiseProduct(f)));
      }
      add("k2_K_over_r2_random", sup);
      // sup over all grid functions: ||k^2 K r^{-2}||
      const double exact = kk * unitary_norm(G, K.cast<cplx>() * rm2.cast<cplx>().asDiagonal());
      add("k2_K_over_r2", exact);
      grp.push_back({k, alpha, "P57a", exact});
      grp.push_back({k, alpha, "P57b", d2Z + kk * rm2Z + r2Z + k * Z});
      grp.push_back({k, alpha, "P57c", d1L + rm1L + L + mL});
      grp.push_back({k, alpha, "P57d", Lm + mLm});
    }
  });

  CoercivityReport rep;
  for (auto& c : cells) rep.rows.insert(rep.rows.end(), c.begin(), c.end());
  for (auto& c : groups) rep.grouped.insert(rep.grouped.end(), c.begin(), c.end());
  rep.bounded = true;
  for (const auto& row : rep.rows) {
    if (!std::isfinite(row.value)) rep.bounded = false;
    if (row.k == 1 && row.quantity == "r2_Zinv") rep.r2_Z1inv_max = std::max(rep.r2_Z1inv_max, row.value);
  }
  std::vector<double> window;
  for (size_t i : upper_half(alphas)) window.push_back(alphas[i]);
  for (int k : k_list) {
    std::vector<std::string> names;
    for (const auto& row : rep.grouped)
      if (row.k == k && std::find(names.begin(), names.end(), row.quantity) == names.end())
        names.push_back(row.quantity);
    for (const auto& q : names) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (const auto& row : rep.grouped) {
        if (row.k != k || row.quantity != q) continue;
        if (std::find(window.begin(), window.end(), row.alpha) == window.end()) continue;
        lo = std::min(lo, row.value);
        hi = std::max(hi, row.value);
      }
      if (hi > 0.0) rep.max_spread = std::max(rep.max_spread, (hi - lo) / hi);
    }
  }
  rep.stable = rep.max_spread <= 0.1;
  return rep;
}

std::string to_string(LemmaId id) {
  switch (id) {
    case LemmaId::A1_f: return "A1_f";
    case LemmaId::A1_sigma: return "A1_sigma";
    case LemmaId::A2: return "A2";
    case LemmaId::A3: return "A3";
    case LemmaId::P54: return "P54";
    case LemmaId::P57: return "P57";
    case LemmaId::P55: return "P55";
    case LemmaId::P58: return "P58";
  }
  return "?";
}

LemmaId lemma_id_from_string(const std::string& s) {
  for (LemmaId id : {LemmaId::A1_f, LemmaId::A1_sigma, LemmaId::A2, LemmaId::A3, LemmaId::P54,
                     LemmaId::P57, LemmaId::P55, LemmaId::P58})
    if (to_string(id) == s) return id;
  throw std::invalid_argument("unknown lemma id '" + s + "'");
}

double a1_f_ratio(cplx zeta, double r) {
  // zeta^2 f(zeta r) - 8/r^2 = zeta^2 (F3(z) - 2/z), z = zeta^2 r^2 / 4
  return std::abs(pf::F3_minus_pole(zeta * zeta * r * r / 4.0));
}

double a1_sigma_ratio(cplx zeta, double r) {
  const cplx z = zeta * zeta * r * r / 4.0;
  const double a = std::norm(zeta) * r * r;  // |zeta|^2 r^2
  return std::abs(pf::F1_minus_taylor(z)) / std::min(a * a, a);
}

double a2_ratio(cplx zeta, double r) {
  // zeta^2 (1 - sigma(zeta r)) = 4 r^{-2} F0(-z)
  const cplx z = zeta * zeta * r * r / 4.0;
  const double m = std::norm(zeta);
  return (4.0 / (r * r) * pf::F0(-z)).imag() / std::min(m * m * r * r, m);
}

namespace {

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1));
  return v;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

// The series/closed-form switch must be continuous: evaluate just inside and
// just outside the series radius on every ray.
void check_branch_continuity(const std::function<cplx(cplx)>& fn, const std::vector<double>& thetas,
                             const std::string& name) {
  const double zr = pf::kSeriesRadius * pf::kSeriesRadius / 4.0;
  for (double th : thetas) {
    const cplx u = std::polar(1.0, 2.0 * th);
    const cplx a = fn(zr * (1.0 - 1e-9) * u), b = fn(zr * (1.0 + 1e-9) * u);
    if (std::abs(a - b) > 1e-6 * std::max(1.0, std::abs(a)))
      throw std::runtime_error(name + ": removable-singularity branch discontinuous at |z| = " +
                               std::to_string(zr));
  }
}

InequalityScanReport ray_scan(LemmaId id, const ScanResolution& res) {
  InequalityScanReport rep;
  rep.lemma_id = id;
  const bool lower = id == LemmaId::A2;
  rep.lower_bound = lower;
  const double eps = 1e-3;
  const std::vector<double> thetas =
      lower ? linspace(kPi / 16, kPi / 8, res.n_rays)
            : linspace(-kPi / 8 * (1 - eps), kPi / 8 * (1 - eps), res.n_rays);
  const auto mods = logspace(1e-2, 1e2, res.n_modulus);
  const auto rs = logspace(1e-3, 1e2, res.n_radius);
  if (id == LemmaId::A1_f)
    check_branch_continuity([](cplx z) { return pf::F3_minus_pole(z); }, thetas, "F3 - 2/z");
  else if (id == LemmaId::A1_sigma)
    check_branch_continuity([](cplx z) { return pf::F1_minus_taylor(z); }, thetas, "F1 - 1 + z/2");
  else
    check_branch_continuity([](cplx z) { return pf::F0(-z); }, thetas, "F0(-z)");

  double ext = lower ? std::numeric_limits<double>::infinity() : 0.0;
  for (double th : thetas)
    for (double m : mods)
      for (double r : rs) {
        const cplx zeta = std::polar(m, th);
        const double q = id == LemmaId::A1_f       ? a1_f_ratio(zeta, r)
                         : id == LemmaId::A1_sigma ? a1_sigma_ratio(zeta, r)
                                                   : a2_ratio(zeta, r);
        ++rep.n_points;
        if (!std::isfinite(q) || (lower && q <= 0.0)) {
          ++rep.violations;
          continue;
        }
        ext = lower ? std::min(ext, q) : std::max(ext, q);
      }
  rep.fitted_constant = ext;
  rep.worst_ratio = ext;
  const std::string sector = lower ? "[pi/16, pi/8]" : "(-pi/8, pi/8)";
  rep.scan_domain = std::to_string(res.n_rays) + " rays arg zeta in " + sector + " x " +
                    std::to_string(res.n_modulus) + " |zeta| in [1e-2, 1e2] x " +
                    std::to_string(res.n_radius) + " r in [1e-3, 1e2] (log)";
  return rep;
}

InequalityScanReport a3_scan(const ScanResolution& res) {
  InequalityScanReport rep;
  rep.lemma_id = LemmaId::A3;
  rep.lower_bound = true;
  const GridPtr g = build_grid(res.grid);
  const VectorXd& r = g->nodes();
  const VectorXd& w = g->weights();
  const Index n = r.size();
  const auto thetas = linspace(kPi / 16, kPi / 8, res.n_rays);
  const auto mods = logspace(0.1, 10.0, res.n_modulus);
  double ext = std::numeric_limits<double>::infinity();
  double exact_min = ext;
  for (int k : res.k_list) {
    // K_k(r_i, r_j) with both quadrature weights
    const MatrixXd K = w.asDiagonal() * kernel_matrix(g, k, KernelScheme::Quadrature).entries.real();
    SmoothRandom src(*g, res.seed + static_cast<std::uint64_t>(k));
    for (double th : thetas)
      for (double m : mods) {
        const cplx zeta = std::polar(m, th);
        VectorXd local(n), rhs(n);
        VectorXcd gz(n);
        for (Index i = 0; i < n; ++i) {
          const cplx z = zeta * zeta * r[i] * r[i] / 4.0;
          local[i] = w[i] * (4.0 / (r[i] * r[i]) * pf::F0(-z)).imag();
          rhs[i] = w[i] * std::min(m * m * m * m * r[i] * r[i], m * m);
          gz[i] = pf::g(zeta * r[i]);
        }
        const cplx z4 = std::pow(zeta, 4);
        MatrixXd Q = K;
        for (Index i = 0; i < n; ++i)
          for (Index j = 0; j < n; ++j) Q(i, j) *= (z4 * gz[i] * gz[j]).imag();
        Q = 0.5 * (Q + Q.transpose());
        Q.diagonal() += local;
        for (int s = 0; s < res.n_random; ++s) {
          const VectorXd f = src.real_sample();
          const double q = f.dot(Q * f) / f.dot(rhs.cwiseProduct(f));
          ++rep.n_points;
          if (!std::isfinite(q) || q <= 0.0) {
            ++rep.violations;
            continue;
          }
          ext = std::min(ext, q);
        }
        // inf over all discrete f: smallest eigenvalue of rhs^{-1/2} Q rhs^{-1/2}
        const VectorXd s = rhs.cwiseSqrt().cwiseInverse();
        const MatrixXd S = s.asDiagonal() * Q * s.asDiagonal();
        exact_min = std::min(exact_min, Eigen::SelfAdjointEigenSolver<MatrixXd>(S, Eigen::EigenvaluesOnly)
                                            .eigenvalues()[0]);
      }
  }
  rep.fitted_constant = ext;
  rep.worst_ratio = exact_min;
  rep.notes.push_back("worst_ratio is the exact infimum over all grid functions (generalized eigenvalue)");
  if (!(exact_min > 0.0)) rep.notes.push_back("the exact discrete infimum is not positive");
  rep.scan_domain = std::to_string(res.n_rays) + " rays arg zeta in [pi/16, pi/8] x " +
                    std::to_string(res.n_modulus) + " |zeta| in [0.1, 10] x k in {" +
                    [&] {
                      std::string s;
                      for (size_t i = 0; i < res.k_list.size(); ++i)
                        s += (i ? "," : "") + std::to_string(res.k_list[i]);
                      return s;
                    }() +
                    "} x " + std::to_string(res.n_random) + " random f, grid n=" +
                    std::to_string(res.grid.n) + " R=" + std::to_string(res.grid.r_max);
  return rep;
}

}  // namespace

InequalityScanReport appendix_scan(LemmaId id, const ScanResolution& res) {
  switch (id) {
    case LemmaId::A1_f:
    case LemmaId::A1_sigma:
    case LemmaId::A2:
      return ray_scan(id, res);
    case LemmaId::A3:
      return a3_scan(res);
    default:
      throw std::invalid_argument("appendix_scan: " + to_string(id) +
                                  " is not a scan (use coercivity_table or resolvent_gap_decay)");
  }
}

std::string to_string(DeltaPolicy p) {
  switch (p) {
    case DeltaPolicy::BauerFike: return "bauer-fike";
    case DeltaPolicy::Lemma: return "lemma";
    case DeltaPolicy::Separation: return "separation";
    case DeltaPolicy::Fixed: return "fixed";
  }
  return "?";
}

DeltaPolicy delta_policy_from_string(const std::string& s) {
  for (DeltaPolicy p : {DeltaPolicy::BauerFike, DeltaPolicy::Lemma, DeltaPolicy::Separation, DeltaPolicy::Fixed})
    if (to_string(p) == s) return p;
  throw std::invalid_argument("unknown delta policy '" + s + "'");
}

FigureDataset figure_dataset(int k, double alpha, const DeltaChoice& dc, const GridPolicy& policy,
                             int n_regions, int n_first) {
  if (k < 1) throw std::invalid_argument("figure_dataset: k must be >= 1");
  if (n_first > n_regions) throw std::invalid_argument("figure_dataset: n_first > n_regions");
  FigureDataset out;
  out.k = k;
  out.alpha = alpha;
  out.beta = beta_of(k, alpha);
  out.n_first = n_first;
  out.delta_policy = to_string(dc.policy);
  const GridMeta meta = policy.for_beta(out.beta);
  const GridPtr g = build_grid(meta);
  const OperatorMatrix Z = zhat(g, k);
  const VectorXcd ez = sorted_eigenvalues(Z.entries);
  for (int j = 0; j < std::min<Index>(n_regions, ez.size()); ++j) out.source_eigs.push_back(ez[j].real());
  out.d = unitary_norm(*g, linalg::inverse(lhat(g, k, alpha).entries) - linalg::inverse(Z.entries));

  switch (dc.policy) {
    case DeltaPolicy::BauerFike:
      // Zhat^{-1} is self-adjoint, so sigma(Lhat^{-1}) lies within d of sigma(Zhat^{-1})
      out.delta = out.d;
      break;
    case DeltaPolicy::Lemma:
      out.delta = 2.0 * std::sqrt(out.d);
      break;
    case DeltaPolicy::Separation: {
      const int N = std::min<int>(dc.n_separated, static_cast<int>(out.source_eigs.size()) - 1);
      double gap = std::numeric_limits<double>::infinity();
      for (int j = 0; j < N; ++j)
        gap = std::min(gap, std::abs(1.0 / out.source_eigs[j] - 1.0 / out.source_eigs[j + 1]));
      out.delta = 0.49 * gap;
      break;
    }
    case DeltaPolicy::Fixed:
      if (!(dc.value > 0.0)) throw std::invalid_argument("delta: fixed value must be positive");
      out.delta = dc.value;
      break;
  }
  out.regions = localization_regions({k, alpha}, out.source_eigs, out.delta);
  // numerical range band
  out.box_re_max = 0.0;
  out.box_im_min = -out.beta;
  out.box_im_max = 0.0;
  const double slack = 1e-8 * (1.0 + out.beta);

  out.spectrum = robust_spectrum(k, alpha, meta);
  const VectorXcd ev = out.spectrum.robust_eigenvalues();
  out.region_counts.assign(out.regions.size(), 0);
  out.all_contained = true;
  for (Index i = 0; i < ev.size(); ++i) {
    const cplx z = ev[i];
    out.eigenvalues.push_back(z);
    bool in = false;
    for (size_t j = 0; j < out.regions.size(); ++j)
      if (out.regions[j].contains(z)) {
        in = true;
        ++out.region_counts[j];
      }
    const bool box = z.real() <= out.box_re_max + slack && z.imag() >= out.box_im_min - slack &&
                     z.imag() <= out.box_im_max + slack;
    out.contained.push_back(in && box);
    if (!(in && box)) out.all_contained = false;
  }
  out.first_regions_hit = true;
  for (int j = 0; j < n_first; ++j)
    if (out.region_counts[j] < 1) out.first_regions_hit = false;
  return out;
}

}  // namespace vortex
