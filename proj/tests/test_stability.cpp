#include <catch2/catch_amalgamated.hpp>

#include "magmech/stability.hpp"

using namespace magmech;

namespace {

SystemParams desk_lasing_params() {
  // Desk-scale lasing config: wider phonon line so near-threshold dynamics
  // settle in milliseconds instead of seconds.
  SystemParams p = default_params();
  p.kappa_b = two_pi * 1.5e3;
  return p;
}

}  // namespace

TEST_CASE("red-detuned drive is stable at any tested power", "[stability]") {
  const SystemParams p = default_params();
  for (double dbm : {-10.0, 0.0, 10.0, 20.0, 30.0}) {
    const DriveTone d = make_drive(p, DrivePlacement::red_triple, dbm_to_watts(dbm));
    const StabilityReport rep = stability_analysis(p, d);
    REQUIRE(rep.stable);
  }
}

TEST_CASE("blue-detuned threshold sits at unit cooperativity", "[stability]") {
  const SystemParams p = desk_lasing_params();
  const DriveTone d = make_drive(p, DrivePlacement::blue_triple, 1e-6);
  const StabilityReport rep = stability_analysis(p, d, DrivePlacement::blue_triple);
  REQUIRE(rep.stable);
  REQUIRE(rep.threshold_power.has_value());
  REQUIRE(*rep.predicted_C_at_threshold == Catch::Approx(1.0).epsilon(0.01));

  SECTION("bisection resolves the power to 0.1%") {
    DriveTone just_below = d, just_above = d;
    just_below.power = *rep.threshold_power * 0.995;
    just_above.power = *rep.threshold_power * 1.005;
    REQUIRE(stability_analysis(p, just_below).stable);
    REQUIRE_FALSE(stability_analysis(p, just_above).stable);
  }
}

TEST_CASE("cooperativity crossing one marks the eigenvalue sign change", "[stability]") {
  const SystemParams p = desk_lasing_params();
  const DriveTone d0 = make_drive(p, DrivePlacement::blue_triple, 1e-6);
  const double c_per_watt = window_params(p, d0, DrivePlacement::blue_triple).C_exact / 1e-6;
  const double p_at_c1 = 1.0 / c_per_watt;
  DriveTone d = d0;
  d.power = 0.97 * p_at_c1;
  REQUIRE(stability_analysis(p, d).stable);
  d.power = 1.03 * p_at_c1;
  REQUIRE_FALSE(stability_analysis(p, d).stable);
}

TEST_CASE("lasing knee scan brackets the eigenvalue threshold", "[stability][slow]") {
  const SystemParams p = desk_lasing_params();
  const DriveTone d = make_drive(p, DrivePlacement::blue_triple, 1e-6);
  const StabilityReport rep = stability_analysis(p, d, DrivePlacement::blue_triple);
  const double p_th = *rep.threshold_power;

  std::vector<double> powers;
  for (int i = -3; i <= 3; ++i) powers.push_back(p_th * std::pow(10.0, 0.15 * i / 10.0));
  LasingScanOptions opt;
  opt.grow_efolds = 20.0;
  const KneeScanResult res = lasing_knee_scan(p, DrivePlacement::blue_triple, powers, opt);
  REQUIRE(std::abs(res.knee_power - p_th) / p_th < 0.05);

  // below threshold: numerical floor; above: orders of magnitude louder
  double quiet = 0.0, loud = 0.0;
  for (const auto& pt : res.points) {
    if (pt.power_watts < res.knee_power) quiet = std::max(quiet, pt.sideband_watts);
    else loud = std::max(loud, std::isfinite(pt.sideband_watts) ? pt.sideband_watts : 0.0);
  }
  REQUIRE(loud > 1e6 * quiet);

  // limit cycle at the phonon frequency
  for (const auto& pt : res.points)
    if (pt.grew && std::isfinite(pt.sideband_watts))
      REQUIRE(pt.limit_cycle_freq == Catch::Approx(p.omega_b).epsilon(0.01));
}
