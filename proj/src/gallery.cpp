#include "latticelab/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace latticelab {

namespace {

Expectation expect_eq(std::string label, double observed, double expected, Provenance p,
                      double tol, bool relative = false) {
  Expectation e{std::move(label), observed, expected, p, tol, relative, false, false};
  const double scale = relative ? std::abs(expected) : 1.0;
  e.passed = std::abs(observed - expected) <= tol * scale;
  return e;
}

Expectation expect_geq(std::string label, double observed, double expected, Provenance p,
                       double tol) {
  Expectation e{std::move(label), observed, expected, p, tol, false, true, false};
  e.passed = observed >= expected - tol;
  return e;
}

Func v_basis(std::size_t n, std::size_t k) {
  Func v(n);
  for (std::size_t i = 0; i < k; ++i) v[i] = 1.0;
  return v;
}

CertifyOptions gallery_options(ExecPolicy exec) {
  CertifyOptions opt;
  opt.budget = {2000, 50};
  opt.exec = exec;
  return opt;
}

GalleryResult run_bbody(ExecPolicy exec) {
  GalleryResult r{"bbody", 2, {}, {}};
  const auto oracle = NormOracle::compile(entry_spec("bbody"));
  const auto body = body::sign_split_disc();
  r.rows.push_back(expect_eq("||(1,1)||_B", gauge(*body, Func{1.0, 1.0}), std::sqrt(2.0),
                             Provenance::kExample, kDefaultGaugeTol));
  r.rows.push_back(expect_eq("||(-1,1)||_B", gauge(*body, Func{-1.0, 1.0}), 2.0,
                             Provenance::kExample, kDefaultGaugeTol));

  const auto opt = gallery_options(exec);
  const auto riesz = riesz_violation(oracle, opt);
  r.rows.push_back(expect_geq("riesz violation ratio ||f|| / ||g|| with |f| <= |g|",
                              riesz ? riesz->ratio : 0.0, std::sqrt(2.0), Provenance::kExample,
                              kRelationTol));
  const auto c = restriction_constant(oracle, opt);
  r.rows.push_back(expect_eq("restriction constant", c.value, 1.0, Provenance::kDerived,
                             kRelationTol));
  const auto k = unconditional_constant(oracle, opt);
  r.rows.push_back(expect_eq("unconditional constant", k.value, std::sqrt(2.0),
                             Provenance::kDerived, kRelationTol));
  const auto diag = body_diagnostics(*body, 2, 20000, 0);
  r.rows.push_back(expect_eq("body diagnostic violations",
                             static_cast<double>(diag.symmetry_violations +
                                                 diag.convexity_violations + diag.unbounded_rays +
                                                 (diag.absorbing ? 0 : 1)),
                             0.0, Provenance::kDerived, 0.0));
  r.notes.push_back(
      "Rectangular (restricting to a set never increases the gauge) but not a Riesz norm: "
      "|(-1,1)| = (1,1) has the smaller norm.");
  return r;
}

GalleryResult run_vpullback(std::size_t n) {
  GalleryResult r{"vpullback", n, {}, {}};
  const auto oracle = NormOracle::compile(spec::vbasis_pullback(n));
  for (std::size_t k = 1; k <= n; ++k) {
    r.rows.push_back(expect_eq("||v_" + std::to_string(k) + "||", oracle(v_basis(n, k)),
                               1.0 / static_cast<double>(k), Provenance::kExample, 1e-12, true));
  }

  double prev_c = 0.0;
  double prev_l = 0.0;
  bool monotone = true;
  for (std::size_t m : {4u, 8u, 16u}) {
    const auto o = NormOracle::compile(spec::vbasis_pullback(m));
    const Func v = v_basis(m, m);
    const double c = o(restrict(v, AtomSet(m, {0}))) / o(v);
    const Func e1 = Func::basis(m, 0);
    const Func g = v - e1;
    const Func h = -e1;
    const double lip = o(abs(g) - abs(h)) / o(g - h);
    const double md = static_cast<double>(m);
    r.rows.push_back(expect_geq("restriction ratio at (v_n, {1}), n = " + std::to_string(m), c,
                                md, Provenance::kDerived, 1e-9 * md));
    r.rows.push_back(expect_geq("modulus-map ratio at (-e_1 + v_n, -e_1), n = " + std::to_string(m),
                                lip, 2.0 * md / std::sqrt(1.0 + 1.0 / (4.0 * md * md)),
                                Provenance::kDerived, 1e-9 * md));
    monotone = monotone && c >= prev_c && lip >= prev_l;
    prev_c = c;
    prev_l = lip;
  }
  r.rows.push_back(expect_eq("growth nondecreasing in n", monotone ? 1.0 : 0.0, 1.0,
                             Provenance::kDerived, 0.0));
  r.notes.push_back(
      "-e_1 + v_n is nonnegative for every n while ||v_n|| = 1/n -> 0, so in the infinite "
      "span the positive cone is not closed; at finite n this shows up as the growth above.");
  r.notes.push_back(
      "The restriction and modulus-map ratios grow linearly in n: no uniform rectangular "
      "constant, and |.| is not uniformly continuous.");
  return r;
}

GalleryResult run_pnorm_reference(ExecPolicy exec) {
  GalleryResult r{"pnorm-reference", 4, {}, {}};
  const Func f{3.0, -4.0, 0.0, 0.0};
  const auto opt = gallery_options(exec);
  struct Case {
    double p;
    double expected;
  };
  for (auto [p, expected] : {Case{1.0, 7.0}, Case{2.0, 5.0}, Case{kInfinity, 4.0}}) {
    const auto oracle = NormOracle::compile(spec::pnorm(p), 4);
    const std::string tag = std::isinf(p) ? "inf" : std::to_string(static_cast<int>(p));
    r.rows.push_back(expect_eq("||(3,-4,0,0)||_" + tag, oracle(f), expected,
                               Provenance::kClosedForm, 1e-12, true));
    r.rows.push_back(expect_eq("restriction constant, p = " + tag,
                               restriction_constant(oracle, opt).value, 1.0,
                               Provenance::kClosedForm, 1e-12));
    r.rows.push_back(expect_eq("ideal constant, p = " + tag, ideal_constant(oracle, opt).value,
                               1.0, Provenance::kClosedForm, 1e-12));
  }
  r.notes.push_back("p-norms are lattice norms: every structural constant equals 1.");
  return r;
}

}  // namespace

bool GalleryResult::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const Expectation& e) { return e.passed; });
}

std::vector<EntryInfo> list_entries() {
  return {
      {"bbody", "gauge of the sign-split disc in R^2: rectangular, not a Riesz norm", 2, 2, 2},
      {"pnorm-reference", "p-norms on 4 atoms (p = 1, 2, inf) as lattice-norm baseline", 4, 4, 4},
      {"vpullback", "l2 pullback through the partial-sum basis v_k = e_1 + ... + e_k", 8, 1, 64},
  };
}

NormSpecPtr entry_spec(const std::string& name, std::optional<std::size_t> dim) {
  for (const auto& e : list_entries()) {
    if (e.name != name) continue;
    const std::size_t n = dim.value_or(e.default_dim);
    if (n < e.min_dim || n > e.max_dim) {
      throw ValidationError("entry '" + name + "' supports dimensions " +
                            std::to_string(e.min_dim) + ".." + std::to_string(e.max_dim));
    }
    if (name == "bbody") return spec::gauge(body::sign_split_disc());
    if (name == "pnorm-reference") return spec::pnorm(2.0, std::vector<double>(n, 1.0));
    return spec::vbasis_pullback(n);
  }
  throw UnknownEntryError("unknown gallery entry '" + name + "'");
}

GalleryResult run_entry(const std::string& name, std::optional<std::size_t> dim, ExecPolicy exec) {
  const auto s = entry_spec(name, dim);  // validates name and dimension
  (void)s;
  if (name == "bbody") return run_bbody(exec);
  if (name == "pnorm-reference") return run_pnorm_reference(exec);
  return run_vpullback(dim.value_or(8));
}

std::vector<SuiteNorm> reference_suite() {
  std::vector<SuiteNorm> s;
  s.push_back({"pnorm-1", spec::pnorm(1.0), 4});
  s.push_back({"pnorm-2", spec::pnorm(2.0), 4});
  s.push_back({"pnorm-inf-weighted", spec::pnorm(kInfinity, {1.0, 2.0, 3.0}), 3});
  s.push_back({"lp3-measure", spec::lp_of_measure(MeasureSpace({0.5, 0.25, 0.125, 0.125}), 3.0), 4});
  s.push_back({"bbody", spec::gauge(body::sign_split_disc()), 2});
  s.push_back({"hexagon",
               spec::gauge(body::intersect({body::slab({1.0, 0.0}, 1.0), body::slab({0.0, 1.0}, 1.0),
                                            body::slab({1.0, 1.0}, 1.0)})),
               2});
  const auto ball_slab =
      spec::gauge(body::intersect({body::ball(1.0), body::slab({1.0, 1.0, 1.0}, 1.0)}));
  s.push_back({"ball-slab-3d", ball_slab, 3});
  s.push_back({"rect-ball-slab-3d", spec::rectangularized(ball_slab), 3});
  s.push_back({"vpullback-4", spec::vbasis_pullback(4), 4});
  s.push_back({"rect-vpullback-4", spec::rectangularized(spec::vbasis_pullback(4)), 4});
  s.push_back({"vnorm-rect-vpullback-4",
               spec::vnorm(spec::rectangularized(spec::vbasis_pullback(4))), 4});
  s.push_back({"vnorm-bbody", spec::vnorm(spec::gauge(body::sign_split_disc())), 2});
  s.push_back({"scaled-pullback-l1",
               spec::scaled(1.5, spec::pullback({{2.0, 1.0, 0.0}, {0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}},
                                                spec::pnorm(1.0))),
               3});
  return s;
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kExample: return "example";
    case Provenance::kClosedForm: return "closed-form";
    case Provenance::kDerived: return "derived";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const Expectation& e) {
  j = {{"label", e.label},
       {"observed", e.observed},
       {"expected", e.expected},
       {"comparison", e.lower_bound ? ">=" : "=="},
       {"tol", e.tol},
       {"relative", e.relative},
       {"provenance", to_string(e.provenance)},
       {"passed", e.passed}};
}

void to_json(nlohmann::json& j, const GalleryResult& r) {
  j = {{"entry", r.name},
       {"dimension", r.dimension},
       {"rows", r.rows},
       {"notes", r.notes},
       {"passed", r.passed()}};
}

std::string gallery_text(const GalleryResult& r) {
  std::ostringstream os;
  os << std::setprecision(15);
  os << r.name << " (n = " << r.dimension << ")\n";
  for (const auto& e : r.rows) {
    os << "  [" << (e.passed ? "pass" : "FAIL") << "] " << e.label << ": " << e.observed
       << (e.lower_bound ? " >= " : " vs ") << e.expected << "  (" << to_string(e.provenance)
       << ")\n";
  }
  for (const auto& n : r.notes) os << "  note: " << n << '\n';
  return os.str();
}

}  // namespace latticelab
