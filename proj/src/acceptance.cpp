#include "vortexspec/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "vortexspec/deform.hpp"
#include "vortexspec/linalg.hpp"
#include "vortexspec/semigroup.hpp"
#include "vortexspec/spectral.hpp"
#include "vortexspec/study.hpp"
#include "vortexspec/waveop.hpp"

namespace vortex {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string g6(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", x);
  return b;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

AssemblyOptions symmetric() {
  AssemblyOptions o;
  o.symmetrize = true;
  return o;
}

CriterionResult c1() {
  const auto t0 = Clock::now();
  CriterionResult r{1, "Zhat_1 leading eigenvalues", false, {}, 0.0};
  const auto e = eig(assemble_Z1_hat(build_grid(400, 12.0)));
  const double l1 = e.eigenvalues[0].real(), l2 = e.eigenvalues[1].real(), l3 = e.eigenvalues[2].real();
  const double t = since(t0);
  r.passed = rel(l1, -8) < 1e-6 && rel(l2, -12) < 1e-5 && rel(l3, -16) < 1e-5 && t < 5.0;
  r.detail = "lambda = " + g6(l1) + ", " + g6(l2) + ", " + g6(l3) + "; rel err " + g6(rel(l1, -8)) + ", " +
             g6(rel(l2, -12)) + ", " + g6(rel(l3, -16)) + "; " + g6(t) + " s (< 5)";
  return r;
}

CriterionResult c2() {
  const auto t0 = Clock::now();
  CriterionResult r{2, "alpha = 0 ladder", false, {}, 0.0};
  const GridPtr g = build_grid(400, 12.0);
  double worst = 0.0;
  std::ostringstream d;
  const double s1 = eig(assemble_L1_wavereduced(g, {1, 0.0})).abscissa;
  worst = std::max(worst, std::abs(s1 + 1.5));
  d << "k=1 (V): " << g6(s1);
  for (int k = 2; k <= 6; ++k) {
    const double s = eig(assemble_Hk(g, {k, 0.0})).abscissa;
    worst = std::max(worst, std::abs(s + k / 2.0));
    d << ", k=" << k << ": " << g6(s);
  }
  const double t = since(t0);
  r.passed = worst < 1e-6 && t < 10.0;
  d << "; max err " << g6(worst) << "; " << g6(t) << " s (< 10)";
  r.detail = d.str();
  return r;
}

CriterionResult c3() {
  CriterionResult r{3, "wave-operator identities and spectral equivalence", false, {}, 0.0};
  const auto w = wave_identity_check(build_wave_operators(build_grid(400, 12.0)));
  const bool ident = w.tt_max < 5e-4 && w.ttp_max < 5e-4;
  double disc = 0.0;
  bool ambiguous = false;
  // alpha = 0 needs the wider box for the tenth eigenvalue
  const auto e0 = verify_spectral_equivalence(build_grid(400, 24.0), 0.0);
  disc = std::max(disc, e0.discrepancy);
  ambiguous |= e0.ambiguous;
  for (double a : {8 * kPi, 80 * kPi}) {
    const auto e = verify_spectral_equivalence(build_grid(400, 12.0), a);
    disc = std::max(disc, e.discrepancy);
    ambiguous |= e.ambiguous;
  }
  const bool equiv = disc < 1e-4 && !ambiguous;
  r.passed = ident && equiv;
  r.detail = std::string(ident ? "identities ok" : "identities FAIL") + ": ||TTt-I||max " + g6(w.tt_max) +
             ", ||TtT-P||max " + g6(w.ttp_max) + " (need < 5e-4; square discretizations force >= 1/(2n) = " +
             g6(1.0 / 800) + " by the trace gap " + g6(w.trace_gap) + "), r>=0.5: " + g6(w.tt_outer) + ", " +
             g6(w.ttp_outer) + "; equivalence " + (equiv ? "ok" : "FAIL") + ": discrepancy " + g6(disc);
  return r;
}

CriterionResult c4(int workers) {
  const auto t0 = Clock::now();
  CriterionResult r{4, "scaling laws (sweep 100..3162, k_max 8)", false, {}, 0.0};
  SweepConfig cfg;
  cfg.workers = workers;
  const auto s = run_sweep(cfg);
  const double t = since(t0);
  const bool se = s.sigma_exponent >= 0.45 && s.sigma_exponent <= 0.55;
  const bool pe = s.psi_exponent >= 0.28 && s.psi_exponent <= 0.38;
  const bool ord = s.ordering_holds(1e-6);
  bool flagged = false;
  for (bool f : s.flagged) flagged |= f;
  r.passed = se && pe && ord && s.monotone_violations == 0 && t < 600.0;
  std::ostringstream d;
  d << "sigma_exp " << g6(s.sigma_exponent) << " (0.45..0.55), psi_exp " << g6(s.psi_exponent)
    << " (0.28..0.38), Sigma>=Psi>=1 " << (ord ? "yes" : "NO") << ", Sigma/alpha^1/2 in ["
    << g6(s.sigma_prefactor_band.first) << ", " << g6(s.sigma_prefactor_band.second) << "], Sigma attained at k = "
    << s.per_mode_argmax.back() << ", monotone violations " << s.monotone_violations
    << (flagged ? ", robustness flags present" : "") << "; " << g6(t) << " s (< 600)";
  r.detail = d.str();
  return r;
}

CriterionResult c5(int workers) {
  CriterionResult r{5, "resolvent-gap decay (k = 1, 2)", false, {}, 0.0};
  const auto g1 = resolvent_gap_decay(default_alpha_grid(), 1, GridPolicy{}, workers);
  const auto g2 = resolvent_gap_decay(default_alpha_grid(), 2, GridPolicy{}, workers);
  r.passed = g1.passed && g2.passed;
  r.detail = "k=1: exponent " + g6(g1.exponent) + ", C " + g6(g1.C) + ", monotone " + (g1.monotone ? "yes" : "no") +
             "; k=2: exponent " + g6(g2.exponent) + ", C " + g6(g2.C) + ", monotone " +
             (g2.monotone ? "yes" : "no") + " (need exponent <= -0.08)";
  return r;
}

CriterionResult c6() {
  CriterionResult r{6, "perturbation-ball certificate at alpha = 1e4", false, {}, 0.0};
  const double alpha = 1e4;
  const GridPtr g = build_grid(GridPolicy{}.for_beta(alpha / (8 * kPi)));
  const auto Zi = inverse_operator(assemble_Z1_hat(g, symmetric()));
  const auto Li = inverse_operator(assemble_Lhat(g, {1, alpha}, LhatKind::K1, symmetric()));
  const auto rep = lemma53_certificate(Li, Zi, eig(Zi), 0.0, 1);
  r.passed = rep.part_i && rep.part_ii;
  std::ostringstream d;
  d << "d " << g6(rep.d) << ", delta " << g6(rep.delta) << ", hypothesis " << (rep.hypothesis_ok ? "ok" : "no")
    << "; (i) " << (rep.part_i ? "pass" : "FAIL") << " (" << rep.escaped << " escaped); (ii) "
    << (rep.part_ii ? "pass" : "FAIL");
  for (const auto& b : rep.balls)
    d << " [count " << b.count << ", multiplicity " << b.multiplicity << ", isolated "
      << (b.isolated ? "yes" : "no") << (b.note.empty() ? "" : ": " + b.note) << "]";
  r.detail = d.str();
  return r;
}

CriterionResult c7() {
  CriterionResult r{7, "figure-data containment", false, {}, 0.0};
  r.passed = true;
  std::ostringstream d;
  for (int k : {1, 2}) {
    const auto fd = figure_dataset(k, 1000.0, {}, GridPolicy{});
    r.passed &= fd.passed();
    int in = 0;
    for (bool c : fd.contained) in += c;
    d << "k=" << k << ": " << in << "/" << fd.eigenvalues.size() << " robust eigenvalues contained, first "
      << fd.n_first << " region counts";
    for (int j = 0; j < fd.n_first; ++j) d << " " << fd.region_counts[j];
    d << " (delta = d = " << g6(fd.delta) << ")" << (k == 1 ? "; " : "");
  }
  r.detail = d.str();
  return r;
}

CriterionResult c8() {
  CriterionResult r{8, "deformation invariance of Z_1^z", false, {}, 0.0};
  const std::vector<DeformationPoint> zs{DeformationPoint(1.0), DeformationPoint(std::polar(1.0, kPi / 16)),
                                         DeformationPoint(std::polar(1.0, -kPi / 16)),
                                         DeformationPoint(std::polar(0.9, kPi / 10))};
  double drift = 0.0;
  bool amb = false;
  std::ostringstream d;
  for (auto [alpha, R] : {std::pair{0.0, 20.0}, std::pair{1000.0, 16.0}}) {
    const auto z = spectrum_z_independence(DeformFamily::Z1, {1, alpha}, zs, build_grid(400, R), 5);
    drift = std::max(drift, z.drift);
    amb |= z.ambiguous;
    d << "alpha=" << g6(alpha) << ": drift " << g6(z.drift) << "; ";
  }
  r.passed = drift < 1e-4 && !amb;
  d << "max " << g6(drift) << " (< 1e-4)";
  r.detail = d.str();
  return r;
}

CriterionResult c9() {
  CriterionResult r{9, "semigroup consistency", false, {}, 0.0};
  TensorGrid2D tg;
  const MatrixXd G = gaussian_G(tg), dG = gaussian_dG1(tg);
  double eG = 0.0, edG = 0.0;
  for (double tau : {0.3, 1.0, 3.0}) {
    eG = std::max(eG, (heat_kernel_apply(tg, G, tau) - G).cwiseAbs().maxCoeff() / G.cwiseAbs().maxCoeff());
    edG = std::max(edG, (heat_kernel_apply(tg, dG, tau) - std::exp(-tau / 2) * dG).cwiseAbs().maxCoeff() /
                            dG.cwiseAbs().maxCoeff());
  }
  std::ostringstream d;
  d << "heat: G " << g6(eG) << ", d1G " << g6(edG) << "; rates:";
  bool rates = true;
  for (auto [k, alpha] : {std::pair{1, 0.0}, std::pair{2, 1000.0}}) {
    const GridPtr g = build_grid(GridPolicy{}.for_beta(k * alpha / (8 * kPi)));
    const auto H = assemble_Hk(g, {k, alpha});
    const auto e = eig(H);
    const double gap = e.eigenvalues[0].real() - e.eigenvalues[1].real();
    const double tmax = std::max(12.0 / std::abs(e.abscissa), 20.0 / gap);
    std::vector<double> taus;
    for (int i = 1; i <= 60; ++i) taus.push_back(tmax * i / 60);
    const VectorXd& rr = g->nodes();
    const VectorXcd w0 = (rr.array().pow(1.5) * (-rr.array().square() / 8).exp() * (1.0 + 0.3 * rr.array()))
                             .matrix()
                             .cast<cplx>();
    const auto fit = decay_rate(propagate(H, w0, taus), {tmax / 2, tmax});
    const double err = std::abs(fit.rate / e.abscissa - 1.0);
    rates &= err < 0.02 && fit.accepted;
    d << " (" << k << "," << g6(alpha) << ") fit " << g6(fit.rate) << " vs " << g6(e.abscissa) << " rel "
      << g6(err);
  }
  const GridPtr g = build_grid(300, 12.0);
  const VectorXd& rr = g->nodes();
  const VectorXcd f1 = (rr.array().pow(1.5) * (-rr.array().square() / 8).exp()).matrix().cast<cplx>();
  const VectorXcd f2 = (rr.array().pow(2.5) * (-rr.array().square() / 6).exp()).matrix().cast<cplx>();
  std::vector<double> taus;
  for (int i = 1; i <= 12; ++i) taus.push_back(0.5 * i);
  double disc = 0.0, env = 0.0;
  for (double alpha : {0.0, 100.0, 1000.0}) {
    const auto du = duhamel_block0(g, alpha, f1, f2, taus);
    disc = std::max(disc, du.discrepancy);
    env = std::max(env, du.envelope);
  }
  r.passed = eG < 1e-6 && edG < 1e-6 && rates && disc < 1e-8;
  d << "; Duhamel discrepancy " << g6(disc) << " (< 1e-8), envelope max " << g6(env);
  r.detail = d.str();
  return r;
}

CriterionResult c10(int workers) {
  CriterionResult r{10, "coercivity and appendix inequalities", false, {}, 0.0};
  const auto rep = coercivity_table(default_alpha_grid(), {1, 2, 4, 8}, GridPolicy{}, 1, 200, workers);
  std::ostringstream d;
  d << "coercivity: bounded " << (rep.bounded ? "yes" : "no") << ", ||r^2 Z1hat^-1|| max " << g6(rep.r2_Z1inv_max)
    << " (<= 1+1e-6), alpha spread max " << g6(rep.max_spread) << " (<= 0.1)";
  // name the unstable groups
  std::vector<double> window;
  for (size_t i : upper_half(default_alpha_grid())) window.push_back(default_alpha_grid()[i]);
  std::vector<std::string> bad;
  for (const auto& a : rep.grouped) {
    double lo = 1e300, hi = 0;
    for (const auto& b : rep.grouped)
      if (b.k == a.k && b.quantity == a.quantity &&
          std::find(window.begin(), window.end(), b.alpha) != window.end()) {
        lo = std::min(lo, b.value);
        hi = std::max(hi, b.value);
      }
    const std::string tag = a.quantity + "(k=" + std::to_string(a.k) + ") " + g6((hi - lo) / hi);
    if ((hi - lo) / hi > 0.1 && std::find(bad.begin(), bad.end(), tag) == bad.end()) bad.push_back(tag);
  }
  if (!bad.empty()) {
    d << " [unstable:";
    for (const auto& b : bad) d << " " << b;
    d << "]";
  }
  bool scans = true;
  d << "; scans:";
  for (LemmaId id : {LemmaId::A1_f, LemmaId::A1_sigma, LemmaId::A2, LemmaId::A3}) {
    const auto s = appendix_scan(id);
    scans &= s.passed() && s.n_points >= 10000;
    d << " " << to_string(id) << " " << s.violations << " violations / " << s.n_points << " (C " << g6(s.fitted_constant)
      << ")";
  }
  r.passed = rep.bounded && rep.stable && rep.r2_Z1inv_max <= 1.0 + 1e-6 && scans;
  r.detail = d.str();
  return r;
}

CriterionResult c11() {
  CriterionResult r{11, "numerical range of L_1", false, {}, 0.0};
  const double alpha = 1000.0, beta = alpha / (8 * kPi);
  const auto A = assemble_L1_wavereduced(build_grid(GridPolicy{}.for_beta(beta)), {1, alpha});
  auto a = numerical_range_sample(A, 500, RangeSampler::RandomGaussian, 1);
  const auto b = numerical_range_sample(A, 500, RangeSampler::EigvecSeeded, 2);
  a.points.insert(a.points.end(), b.points.begin(), b.points.end());
  int bad = 0;
  double re_max = -1e300, im_min = 1e300, im_max = -1e300;
  for (cplx z : a.points) {
    re_max = std::max(re_max, z.real());
    im_min = std::min(im_min, z.imag());
    im_max = std::max(im_max, z.imag());
    if (!(z.real() <= 1e-8 && z.imag() >= -beta - 1e-8 && z.imag() <= 1e-8)) ++bad;
  }
  r.passed = bad == 0 && a.points.size() == 1000;
  r.detail = std::to_string(a.points.size()) + " samples at alpha=1000 (beta " + g6(beta) + "): Re max " + g6(re_max) +
             ", Im in [" + g6(im_min) + ", " + g6(im_max) + "], outside " + std::to_string(bad);
  return r;
}

}  // namespace

std::string format_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d  %s", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str());
  char tail[32];
  std::snprintf(tail, sizeof tail, " (%.1f s)", r.seconds);
  return std::string(head) + " | " + r.detail + tail;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  const std::vector<std::function<CriterionResult()>> all{
      c1, c2, c3, [&] { return c4(opt.workers); }, [&] { return c5(opt.workers); }, c6, c7, c8, c9,
      [&] { return c10(opt.workers); }, c11};
  std::vector<CriterionResult> out;
  for (size_t i = 0; i < all.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
      r = all[i]();
    } catch (const std::exception& e) {
      r.id = id;
      r.title = "criterion " + std::to_string(id);
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = since(t0);
    if (on_result) on_result(r);
    out.push_back(r);
  }
  return out;
}

}  // namespace vortex
