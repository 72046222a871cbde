#include "vortexspec/io.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace vortex::io {

using nlohmann::ordered_json;

namespace {

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

// Numbers go through num() so JSON and CSV share one serialization.
ordered_json jnum(double x) { return ordered_json::parse(std::isfinite(x) ? num(x) : "null"); }

}  // namespace

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_spectrum_csv(const fs::path& p, int k, double alpha, const RobustSpectrum& s) {
  auto f = open_out(p);
  f << "k,alpha,re,im,residual,grid_robust\n";
  for (Index i = 0; i < s.eigenvalues.size(); ++i)
    f << k << ',' << num(alpha) << ',' << num(s.eigenvalues[i].real()) << ','
      << num(s.eigenvalues[i].imag()) << ',' << num(s.residuals[i]) << ',' << (s.robust[i] ? 1 : 0)
      << '\n';
}

void write_sweep_csv(const fs::path& p, const SweepResult& s) {
  auto f = open_out(p);
  f << "alpha,sigma,psi,argmax_k\n";
  for (size_t i = 0; i < s.alphas.size(); ++i)
    f << num(s.alphas[i]) << ',' << num(s.sigma[i]) << ',' << num(s.psi[i]) << ','
      << s.per_mode_argmax[i] << '\n';
}

void write_sweep_modes_csv(const fs::path& p, const SweepResult& s) {
  auto f = open_out(p);
  f << "alpha,k,abscissa,psi,lambda_star,robust_delta,n,r_max\n";
  for (const auto& row : s.modes)
    for (const auto& m : row)
      f << num(m.alpha) << ',' << m.k << ',' << num(m.abscissa) << ',' << num(m.psi) << ','
        << num(m.lambda_star) << ',' << num(m.robust_delta) << ',' << m.grid.n << ','
        << num(m.grid.r_max) << '\n';
}

void write_gap_decay_csv(const fs::path& p, const GapDecayResult& g) {
  auto f = open_out(p);
  f << "k,alpha,beta,d\n";
  for (size_t i = 0; i < g.alphas.size(); ++i)
    f << g.k << ',' << num(g.alphas[i]) << ',' << num(g.betas[i]) << ',' << num(g.d[i]) << '\n';
}

void write_coercivity_csv(const fs::path& p, const std::vector<CoercivityRow>& rows) {
  auto f = open_out(p);
  f << "k,alpha,quantity,value\n";
  for (const auto& r : rows) f << r.k << ',' << num(r.alpha) << ',' << r.quantity << ',' << num(r.value) << '\n';
}

void write_trajectory_csv(const fs::path& p, const Trajectory& t) {
  auto f = open_out(p);
  f << "tau,norm,log_norm\n";
  for (size_t i = 0; i < t.taus.size(); ++i)
    f << num(t.taus[i]) << ',' << num(t.norms[i]) << ',' << num(t.log_norms[i]) << '\n';
}

void write_json(const fs::path& p, const std::string& json_text) {
  auto f = open_out(p);
  f << json_text << '\n';
}

std::string regions_json(const FigureDataset& fd) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : fd.regions) {
    ordered_json j;
    j["k"] = r.mode;
    j["j"] = r.index;
    j["center_re"] = jnum(r.center.real());
    j["center_im"] = jnum(r.center.imag());
    j["radius"] = jnum(r.radius);
    j["delta"] = jnum(r.delta);
    j["exterior"] = r.exterior;
    arr.push_back(j);
  }
  return arr.dump(1);
}

std::string figure_meta_json(const FigureDataset& fd) {
  ordered_json j;
  j["k"] = fd.k;
  j["alpha"] = jnum(fd.alpha);
  j["beta"] = jnum(fd.beta);
  j["d"] = jnum(fd.d);
  j["delta"] = jnum(fd.delta);
  j["delta_policy"] = fd.delta_policy;
  j["box"] = {{"re_max", jnum(fd.box_re_max)}, {"im_min", jnum(fd.box_im_min)}, {"im_max", jnum(fd.box_im_max)}};
  ordered_json ev = ordered_json::array();
  for (size_t i = 0; i < fd.eigenvalues.size(); ++i)
    ev.push_back({{"re", jnum(fd.eigenvalues[i].real())},
                  {"im", jnum(fd.eigenvalues[i].imag())},
                  {"contained", static_cast<bool>(fd.contained[i])}});
  j["robust_eigenvalues"] = ev;
  j["region_counts"] = fd.region_counts;
  j["n_first"] = fd.n_first;
  j["all_contained"] = fd.all_contained;
  j["first_regions_hit"] = fd.first_regions_hit;
  return j.dump(1);
}

std::string scan_json(const std::vector<InequalityScanReport>& reps) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reps) {
    ordered_json j;
    j["lemma_id"] = to_string(r.lemma_id);
    j["scan_domain"] = r.scan_domain;
    j["lower_bound"] = r.lower_bound;
    j["fitted_constant"] = jnum(r.fitted_constant);
    j["violations"] = r.violations;
    j["worst_ratio"] = jnum(r.worst_ratio);
    j["n_points"] = r.n_points;
    j["notes"] = r.notes;
    arr.push_back(j);
  }
  return arr.dump(1);
}

std::string sweep_fit_json(const SweepResult& s) {
  ordered_json j;
  j["sigma_exponent"] = jnum(s.sigma_exponent);
  j["psi_exponent"] = jnum(s.psi_exponent);
  j["sigma_prefactor_band"] = {jnum(s.sigma_prefactor_band.first), jnum(s.sigma_prefactor_band.second)};
  ordered_json fa = ordered_json::array();
  for (double a : s.fit_alphas) fa.push_back(jnum(a));
  j["fit_alphas"] = fa;
  j["psi_argmin_k"] = s.psi_argmin;
  std::vector<bool> fl(s.flagged.begin(), s.flagged.end());
  j["flagged"] = fl;
  j["monotone_violations"] = s.monotone_violations;
  j["warnings"] = s.warnings;
  return j.dump(1);
}

std::string gap_fit_json(const GapDecayResult& g) {
  ordered_json j;
  j["k"] = g.k;
  j["exponent"] = jnum(g.exponent);
  j["C"] = jnum(g.C);
  ordered_json fa = ordered_json::array();
  for (double a : g.fit_alphas) fa.push_back(jnum(a));
  j["fit_alphas"] = fa;
  j["monotone"] = g.monotone;
  j["passed"] = g.passed;
  return j.dump(1);
}

std::string sha256_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + p.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 15];
  while (f) {
    f.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<size_t>(f.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return out.str();
}

bool RunManifest::all_passed() const {
  for (const auto& g : gates)
    if (!g.passed) return false;
  return true;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const fs::path& out_dir, const RunManifest& m) {
  ordered_json j;
  j["command"] = m.command;
  j["config"] = m.config_json.empty() ? ordered_json::object() : ordered_json::parse(m.config_json);
  j["version"] = kVersion;
  j["started"] = m.started;
  j["finished"] = m.finished;
  ordered_json gates = ordered_json::array();
  for (const auto& g : m.gates) gates.push_back({{"name", g.name}, {"passed", g.passed}, {"detail", g.detail}});
  j["gates"] = gates;
  j["all_passed"] = m.all_passed();
  ordered_json files = ordered_json::array();
  for (const auto& f : m.files)
    files.push_back({{"path", f.generic_string()}, {"sha256", sha256_file(out_dir / f)},
                     {"bytes", fs::file_size(out_dir / f)}});
  j["files"] = files;
  write_json(out_dir / "manifest.json", j.dump(1));
}

}  // namespace vortex::io
