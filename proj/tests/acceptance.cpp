// Acceptance checks A1..A10. One PASS/FAIL line per criterion followed by
// indented detail lines. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qecm/analytics.hpp"
#include "qecm/codes.hpp"
#include "qecm/harness.hpp"
#include "qecm/pauli.hpp"
#include "qecm/protocols.hpp"

using namespace qecm;

namespace {

int failures = 0;

void verdict(const char* id, bool ok, const std::string& what) {
  std::printf("%s %s  %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class... A>
void detail(const char* fmt, A... a) {
  std::printf("    ");
  std::printf(fmt, a...);
  std::printf("\n");
}

StateVector random_code_state(const CodeSpace& code, std::mt19937_64& rng) {
  const auto c = oracle::random_vector(code.code_dim(), rng);
  std::vector<cplx> v(code.dim());
  for (std::size_t a = 0; a < code.code_dim(); ++a)
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += c[a] * code.basis()[a][i];
  return StateVector::normalized(std::move(v));
}

void a1() {
  bool ok = true;
  const auto code = CodeSpace::two_qubit_plus();
  const Matrix g = pauli::materialize("XI");
  for (double p : {0.01, 0.1, 0.5}) {
    const auto r = check_conditions(g, dephasing_channel(p, 1, 2), code);
    const double a_err = std::max({std::abs(r.a_matrix(0, 0) - (1.0 - p)), std::abs(r.a_matrix(1, 1) - p),
                                   std::abs(r.a_matrix(0, 1)), std::abs(r.a_matrix(1, 0))});
    const bool pass = r.commutator_residual <= 1e-10 && r.condition2_residual <= 1e-10 && a_err <= 1e-12;
    ok = ok && pass;
    detail("p=%.2f  cond1 %.2e  cond2 %.2e  max|A - diag(1-p,p)| %.2e", p, r.commutator_residual,
           r.condition2_residual, a_err);
  }
  verdict("A1", ok, "condition checker, two-qubit code under dephasing");
}

void a2() {
  bool ok = true;
  const Matrix z1 = pauli::materialize("ZI");
  std::vector<std::pair<std::string, CodeSpace>> codes;
  const auto b = [](std::size_t i) { return StateVector::basis(4, i); };
  codes.emplace_back("{|00>,|10>}", CodeSpace({b(0), b(2)}));
  codes.emplace_back("{|00>,|11>}", CodeSpace({b(0), b(3)}));
  codes.emplace_back("{|01>,|10>}", CodeSpace({b(1), b(2)}));
  codes.emplace_back("{|00>,|01>}", CodeSpace({b(0), b(1)}));  // xi = 0
  codes.emplace_back("{|0+>,|1->}", CodeSpace({StateVector::normalized({1, 1, 0, 0}), StateVector::normalized({0, 0, 1, -1})}));
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 6; ++k) {
    const auto basis = oracle::random_orthonormal(4, 2, rng);
    codes.emplace_back("random#" + std::to_string(k), CodeSpace({StateVector(basis[0], 1e-9), StateVector(basis[1], 1e-9)}));
  }
  for (double p : {0.01, 0.1}) {
    const std::vector<std::pair<std::string, QuantumChannel>> channels{
        {"emission", spontaneous_emission_channel(p, 1, 2)}, {"parallel Z", pauli_flip_channel('Z', p, 1, 2)}};
    for (const auto& [cname, ch] : channels) {
      for (const auto& [name, code] : codes) {
        const auto r = check_conditions(z1, ch, code);
        if (r.xi <= 0.01) {
          detail("p=%.2f %-10s %-12s xi=%.3g  (vacuous, cond2 %s)", p, cname.c_str(), name.c_str(), r.xi,
                 r.verdicts[1] ? "pass" : "fail");
          continue;
        }
        const bool pass = !r.verdicts[1] && r.condition2_residual >= 0.1 * p;
        ok = ok && pass;
        detail("p=%.2f %-10s %-12s xi=%.3g  cond2 residual %.3e (>= %.1e)  %s", p, cname.c_str(), name.c_str(), r.xi,
               r.condition2_residual, 0.1 * p, pass ? "ok" : "NOT VIOLATED");
      }
    }
  }
  verdict("A2", ok, "no-go cases violate condition (2) for every code with xi > 0.01");
}

void a3() {
  const auto code = CodeSpace::two_qubit_plus();
  const auto ch = dephasing_channel(0.1, 1, 2);
  const auto polar = build_recovery_polar(ch, code);
  const auto circuit = build_syndrome_recovery(RecoveryKind::two_qubit, 2);
  std::mt19937_64 rng(77);
  double worst = 1.0;
  for (int k = 0; k < 50; ++k) {
    const auto psi = random_code_state(code, rng);
    const Matrix out = apply_recovery(apply_kraus(outer(psi.amplitudes(), psi.amplitudes()), ch.kraus()), polar);
    worst = std::min(worst, fidelity_pure(psi, out));
  }
  const auto basis = code_plus_error_basis(code, ch);
  const auto ca = choi_on_subspace([&](const Matrix& m) { return apply_recovery(m, polar); }, basis);
  const auto cb = choi_on_subspace([&](const Matrix& m) { return apply_recovery(m, circuit); }, basis);
  const double dist = frobenius_norm(ca - cb);
  detail("worst fidelity over 50 code states %.15f (>= 1 - 1e-7)", worst);
  detail("Choi distance polar vs syndrome circuit on code + error span (dim %zu): %.3e (<= 1e-7)", basis.size(), dist);
  verdict("A3", worst >= 1.0 - 1e-7 && dist <= 1e-7, "recovery correctness");
}

void a4() {
  bool mean_ok = true, second_ok = true, rederived_ok = true;
  const double phi0 = 1.0;
  const std::size_t samples = 1000000;
  std::uint64_t stream = 1;
  for (double p : {0.01, 0.05, 0.1}) {
    for (std::size_t r : {10u, 100u}) {
      std::mt19937_64 rng(stream_seed(0xD1CE, stream++));
      double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
      for (std::size_t i = 0; i < samples; ++i) {
        const double phi = sample_error_trajectory(phi0, p, r, rng).phi;
        const double q = phi * phi;
        s1 += phi;
        s2 += phi * phi;
        s3 += q;
        s4 += q * q;
      }
      const double n = static_cast<double>(samples);
      const double m1 = s1 / n, se1 = std::sqrt((s2 / n - m1 * m1) / n);
      const double m2 = s3 / n, se2 = std::sqrt((s4 / n - m2 * m2) / n);
      const auto printed = analytics::phase_moments(phi0, p, r);
      const auto rederived = analytics::phase_moments_rederived(phi0, p, r);
      const double z1 = (m1 - (1.0 - p) * phi0) / se1;
      const double z2 = (m2 - printed.f_factor * printed.f_factor * phi0 * phi0) / se2;
      const double z2r = (m2 - rederived.second_moment) / se2;
      mean_ok = mean_ok && std::abs(z1) <= 4.0;
      second_ok = second_ok && std::abs(z2) <= 4.0;
      rederived_ok = rederived_ok && std::abs(z2r) <= 4.0;
      detail("p_r=%.2f r=%3zu  E[Phi] z=%+6.2f   E[Phi^2] vs f^2 Phi0^2 (3/4 bracket) z=%+7.2f   vs 4/3 bracket z=%+6.2f", p,
             r, z1, z2, z2r);
    }
  }
  detail("first moment %s; second moment with the printed bracket %s; with the integrated bracket %s",
         mean_ok ? "ok" : "off", second_ok ? "ok" : "off", rederived_ok ? "ok" : "off");
  verdict("A4", mean_ok && second_ok, "trajectory moments vs closed forms (second moment uses f as printed)");
}

void a5() {
  double worst = 0.0;
  int count = 0;
  for (double p : {0.0, 0.01, 0.02, 0.05}) {
    for (std::uint64_t r : {10u, 100u}) {
      const double f = analytics::f_factor(p, r);
      for (double fphi : {0.05, 0.1, 0.2, 0.3}) {
        ProtocolConfig c;
        c.r = r;
        c.gamma = p > 0.0 ? 1.0 : 0.0;
        c.T = static_cast<double>(r) * (p > 0.0 ? p : 0.01);
        const double phi0 = fphi / f;
        c.omega = 2.0 * phi0 / c.T;
        const double sim = qec_p_plus_exact(c);
        const double ana = analytics::p_plus_analytic(phi0, p, r).value;
        worst = std::max(worst, std::abs(sim - ana));
        ++count;
      }
    }
  }
  detail("%d points, p_r <= 0.05, f Phi0 <= 0.3: max |P+ exact - 1/2(1+cos 2 f Phi0)| = %.3e (<= 2e-3)", count, worst);
  verdict("A5", worst <= 2e-3, "exact QEC fringe vs analytic fringe");
}

void a6() {
  // (a) standard Ramsey, best interrogation time for each total time.
  const double gamma = 1.0;
  std::vector<double> taus{10, 30, 100, 300, 1000}, best_a;
  // r = 1 means alpha = T, so gamma T <= 1; the optimum 1/(2 gamma) is inside.
  const auto t_grid = log_grid(0.05, 1.0 / gamma, 24);
  for (double tau : taus) {
    double best = INFINITY;
    for (double T : t_grid) {
      if (T > tau) continue;
      const auto op = best_operating_point(
          [&](double w) { return standard_p_plus_exact(ProtocolConfig{w, T, 1, gamma}); }, T / 2.0, 1.0, 7);
      best = std::min(best, op.delta_omega / std::sqrt(tau / T));
    }
    best_a.push_back(best);
  }
  const double sa = oracle::loglog_slope(taus, best_a);
  detail("(a) standard Ramsey at optimal T: slope %.4f (target -0.5 +/- 0.05)", sa);

  // (b) ideal correction with r = gamma tau, one run of length tau.
  std::vector<double> taus_b{10, 20, 50, 100, 200, 500}, dw_b;
  for (double tau : taus_b) {
    ProtocolConfig c;
    c.T = tau;
    c.r = static_cast<std::uint64_t>(std::llround(gamma * tau));
    c.gamma = gamma;
    const double mu = mean_phase_factor(gamma * c.alpha());
    const auto op = best_operating_point(
        [&](double w) {
          ProtocolConfig d = c;
          d.omega = w;
          return qec_p_plus_exact(d);
        },
        tau / 2.0, mu, 7);
    dw_b.push_back(op.delta_omega);
  }
  const double sb = oracle::loglog_slope(taus_b, dw_b);
  detail("(b) ideal correction, r = gamma tau: slope %.4f (target -1 +/- 0.05)", sb);

  // (c) GHZ code, fixed tau, N = 2..6.
  const auto res = sweep_qubit_count(default_qubit_count_spec());
  std::vector<double> ns, dw, ns3, dw3;
  for (const auto& [n, d] : res.curve(Strategy::ghz_qec, false)) {
    ns.push_back(n);
    dw.push_back(d);
    if (n >= 3) {
      ns3.push_back(n);
      dw3.push_back(d);
    }
    detail("    N=%g  delta_omega=%.6g  delta_omega*N=%.6g", n, d, d * n);
  }
  const double sc = oracle::loglog_slope(ns, dw);
  detail("(c) GHZ delta_omega vs N over N=2..6: slope %.4f (target -1 +/- 0.1); N=3..6 alone: %.4f", sc,
         oracle::loglog_slope(ns3, dw3));
  verdict("A6", std::abs(sa + 0.5) <= 0.05 && std::abs(sb + 1.0) <= 0.05 && std::abs(sc + 1.0) <= 0.1,
          "scaling laws (a) standard, (b) ideal correction, (c) GHZ qubit count");
}

void a7() {
  SweepSpec s = default_fig2_spec();
  s.grid = log_grid(1e-2, 7e2, 6);
  const auto res = sweep_fig2(s);
  const auto ideal = res.curve(Strategy::qec_ideal), imp = res.curve(Strategy::qec_imperfect),
             std_ = res.curve(Strategy::standard);
  bool between = true;
  for (std::size_t i = 0; i < imp.size(); ++i) {
    if (imp[i].first < 10.0) continue;
    const bool ok = ideal[i].second <= imp[i].second && imp[i].second <= std_[i].second;
    between = between && ok;
    detail("T=%8.3f  ideal %.5g  imperfect %.5g  standard %.5g  %s", imp[i].first, ideal[i].second, imp[i].second,
           std_[i].second, ok ? "" : "OUT OF ORDER");
  }
  std::vector<std::pair<double, double>> tail;
  const double t_max = imp.back().first;
  for (const auto& pt : imp)
    if (pt.first >= t_max / 10.0 * (1.0 - 1e-12)) tail.push_back(pt);
  const auto fit = fit_loglog_slope(tail);
  detail("imperfect curve slope over the last decade [%.4g, %.4g]: %.4f (|slope| <= 0.1)", tail.front().first, t_max,
         fit.slope);
  verdict("A7", between && std::abs(fit.slope) <= 0.1, "imperfect correction lies between and plateaus");
}

void a8() {
  SweepSpec s = default_figSI_spec();
  s.grid = log_grid(1e-1, 1e5, 4);
  const auto res = sweep_figSI(s);
  const auto st = res.curve(Strategy::standard), pq = res.curve(Strategy::qec_per_qubit),
             gz = res.curve(Strategy::ghz_qec);
  const double t1 = res.spec.base.t1, n = static_cast<double>(res.spec.base.N);
  const double improvement = st.back().second / pq.back().second;
  const bool imp_ok = std::abs(improvement / std::sqrt(1000.0) - 1.0) <= 0.15;
  detail("tau=%g: standard/per-qubit = %.4f, sqrt(1000) = %.4f, ratio %.4f (within 15%%)", st.back().first,
         improvement, std::sqrt(1000.0), improvement / std::sqrt(1000.0));
  bool merge_ok = true;
  for (std::size_t i = 0; i < gz.size(); ++i) {
    if (gz[i].first < 10.0 * t1 / n) continue;
    const double ratio = gz[i].second / pq[i].second;
    merge_ok = merge_ok && std::abs(ratio - 1.0) <= 0.15;
    detail("tau=%10.1f  ghz/per-qubit = %.4f", gz[i].first, ratio);
  }
  verdict("A8", imp_ok && merge_ok, "T1-limited crossovers (per-qubit gain, GHZ merging for tau >= 10 T1/N)");
}

void a9() {
  double worst = 0.0;
  const auto polar = build_recovery_polar(dephasing_channel(0.01, 1, 2), CodeSpace::two_qubit_plus());
  for (std::uint64_t r : {1u, 5u, 40u}) {
    for (double w : {0.0, 0.37, 1.2, 2.9, 5.0}) {
      ProtocolConfig c;
      c.omega = w;
      c.T = 1.7;
      c.r = r;
      const double plain = standard_p_plus_exact(ProtocolConfig{w, c.T, 1, 0.0});
      worst = std::max({worst, std::abs(qec_p_plus_exact(c) - plain), std::abs(qec_p_plus_reference(c, polar) - plain)});
    }
  }
  detail("max |P+ corrected - P+ plain| with zero noise over 15 settings, kernel and dense paths: %.3e (<= 1e-9)", worst);
  verdict("A9", worst <= 1e-9, "recovery never corrects the signal");
}

void a10() {
  std::mt19937_64 rng(1010);
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t dim = std::size_t{4} << (inst % 3);
    const auto basis = oracle::random_orthonormal(dim, 2, rng);
    const CodeSpace code({StateVector(basis[0], 1e-9), StateVector(basis[1], 1e-9)});
    const Matrix p = code.projector(), q = Matrix::identity(dim) - p;
    const Matrix g = p * oracle::random_hermitian(dim, rng) * p + q * oracle::random_hermitian(dim, rng) * q;
    const double xi = compute_xi(g, code).xi;
    const double brute = oracle::brute_force_xi(g, basis, 10000, rng);
    worst = std::max(worst, std::abs(xi - brute) / xi);
  }
  const auto r = check_conditions(pauli::materialize("XI"), dephasing_channel(0.1, 1, 2), CodeSpace::two_qubit_plus());
  const std::string text = format_report(r);
  const bool text_ok = text.find("variance max") != std::string::npos && text.find("spread") != std::string::npos &&
                       text.find("xi = 2") != std::string::npos && text.find("(2N)^2") != std::string::npos;
  detail("20 instances (dim 4/8/16, code dim 2): max relative gap to brute force %.3e (<= 1e-6)", worst);
  detail("report shows literal, spread-based variants and the quoted-value note: %s", text_ok ? "yes" : "no");
  verdict("A10", worst <= 1e-6 && text_ok, "xi oracle and report conventions");
}

}  // namespace

int main() {
  a1();
  a2();
  a3();
  a4();
  a5();
  a6();
  a7();
  a8();
  a9();
  a10();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
