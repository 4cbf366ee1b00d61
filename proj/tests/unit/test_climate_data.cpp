#include <doctest.h>

#include <cmath>

#include "climkt/climate_data.hpp"
#include "climkt/error.hpp"
#include "oracles.hpp"
#include "test_files.hpp"

using namespace climkt;

namespace {

ParseError::Kind parse_kind_of(const std::filesystem::path& p, std::size_t* line = nullptr) {
  try {
    load_series_csv(p, "anomaly_c");
  } catch (const ParseError& e) {
    if (line) *line = e.line();
    return e.kind();
  }
  FAIL("expected a parse error");
  return ParseError::Kind::Empty;
}

}  // namespace

TEST_CASE("loader echoes a well-formed file") {
  testfs::TempDir dir("load");
  testfs::write_text(dir / "t.csv", "year,anomaly_c\n1880,-0.20\n1881,-0.12\n");
  const auto s = load_series_csv(dir / "t.csv", "anomaly_c");
  CHECK(s == AnnualSeries(1880, {-0.20, -0.12}));
}

TEST_CASE("loader tolerates CRLF and blank lines") {
  testfs::TempDir dir("crlf");
  testfs::write_text(dir / "t.csv", "year,anomaly_c\r\n1880,-0.20\r\n\r\n1881,-0.12\r\n");
  CHECK(load_series_csv(dir / "t.csv", "anomaly_c").size() == 2);
}

TEST_CASE("loader errors are distinct and name the line") {
  testfs::TempDir dir("errs");
  std::size_t line = 0;

  testfs::write_text(dir / "gap.csv", "year,anomaly_c\n1880,-0.20\n1882,-0.12\n");
  CHECK(parse_kind_of(dir / "gap.csv", &line) == ParseError::Kind::YearGap);
  CHECK(line == 3);

  testfs::write_text(dir / "dup.csv", "year,anomaly_c\n1880,-0.20\n1881,0\n1881,0.1\n");
  CHECK(parse_kind_of(dir / "dup.csv", &line) == ParseError::Kind::DuplicateYear);
  CHECK(line == 4);

  testfs::write_text(dir / "bad.csv", "year,anomaly_c\n1880,abc\n");
  CHECK(parse_kind_of(dir / "bad.csv", &line) == ParseError::Kind::Malformed);
  CHECK(line == 2);

  testfs::write_text(dir / "wide.csv", "year,anomaly_c\n1880,1,2\n");
  CHECK(parse_kind_of(dir / "wide.csv") == ParseError::Kind::Malformed);

  testfs::write_text(dir / "hdr.csv", "yr,temp\n1880,1\n");
  CHECK(parse_kind_of(dir / "hdr.csv", &line) == ParseError::Kind::BadHeader);
  CHECK(line == 1);

  testfs::write_text(dir / "empty.csv", "year,anomaly_c\n");
  CHECK(parse_kind_of(dir / "empty.csv") == ParseError::Kind::Empty);

  CHECK(parse_kind_of(dir / "missing.csv") == ParseError::Kind::MissingFile);

  try {
    load_series_csv(dir / "gap.csv", "anomaly_c");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("gap.csv:3") != std::string::npos);
  }
}

TEST_CASE("bundled fixtures load with the expected spans") {
  const auto t = load_series_csv(testfs::fixture("temperature.csv"), "anomaly_c");
  CHECK(t.size() == 135);
  CHECK(t.start_year() == 1880);
  CHECK(t.end_year() == 2014);
  const auto bundle = load_climate_bundle(
      {testfs::fixture("temperature.csv"), testfs::fixture("co2_ppm.csv"), testfs::fixture("tsi_wm2.csv")});
  CHECK(bundle.log_co2.covers(1880, 2100));
  CHECK(bundle.tsi.covers(1880, 2100));
}

TEST_CASE("log CO2 transform") {
  CHECK(to_log_co2(AnnualSeries(2000, {std::exp(1.0)})).at(2000) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(to_log_co2(AnnualSeries(2000, {400.0})).at(2000) == doctest::Approx(5.9915).epsilon(1e-5));
  const auto c = to_log_co2(AnnualSeries(2000, {350.0, 350.0, 350.0}));
  for (double v : c.values()) CHECK(v == std::log(350.0));
  CHECK_THROWS_AS(to_log_co2(AnnualSeries(2000, {300.0, 0.0})), DomainError);
  CHECK_THROWS_AS(to_log_co2(AnnualSeries(2000, {-1.0})), DomainError);

  std::vector<double> ppm;
  for (int i = 0; i < 200; ++i) ppm.push_back(280.0 + 3.1 * i);
  const auto l = to_log_co2(AnnualSeries(1900, ppm));
  for (std::size_t i = 1; i < l.size(); ++i) CHECK(l.values()[i] > l.values()[i - 1]);
}

TEST_CASE("11-year smoother") {
  const auto flat = smooth_tsi_11yr(AnnualSeries(1900, std::vector<double>(30, 1361.0)));
  CHECK(flat.start_year() == 1900);
  CHECK(flat.size() == 30);
  for (double v : flat.values()) CHECK(v == doctest::Approx(1361.0).epsilon(1e-14));
  CHECK(smooth_tsi_11yr(flat) == flat);

  const auto spike = smooth_tsi_11yr(AnnualSeries(1900, {0, 0, 0, 0, 0, 11, 0, 0, 0, 0, 0}));
  CHECK(spike.at(1905) == doctest::Approx(1.0));

  std::vector<double> ramp;
  for (int i = 0; i < 40; ++i) ramp.push_back(static_cast<double>(i));
  const auto r = smooth_tsi_11yr(AnnualSeries(1900, ramp));
  for (int i = 0; i < 40; ++i) CHECK(r.values()[i] == doctest::Approx(ramp[i]).epsilon(1e-12));

  // Edge window shrinks symmetrically: year index 2 averages indices 0..4.
  const auto e = smooth_tsi_11yr(AnnualSeries(1900, {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048}));
  CHECK(e.values()[0] == 1.0);
  CHECK(e.values()[2] == doctest::Approx((1 + 2 + 4 + 8 + 16) / 5.0));
  CHECK(e.values()[11] == 2048.0);
  CHECK(smooth_tsi_11yr(AnnualSeries(1900, {5.0})).at(1900) == 5.0);
}

TEST_CASE("calibration on exact data") {
  std::vector<double> f, t, t2;
  for (int i = 0; i < 40; ++i) {
    f.push_back(5.6 + 0.01 * i + 0.0001 * i * i);
    t.push_back(1.5 * f.back());
    t2.push_back(-5.0 + f.back());
  }
  const auto fit = calibrate_truth(AnnualSeries(1900, t), AnnualSeries(1900, f), ForcingKind::LogCo2);
  CHECK(fit.beta == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(fit.sigma < 1e-9);
  CHECK(fit.rho == 0.0);
  CHECK(fit.last_year == 1939);

  const auto fit2 = calibrate_truth(AnnualSeries(1900, t2), AnnualSeries(1900, f), ForcingKind::LogCo2);
  CHECK(fit2.alpha == doctest::Approx(-5.0).epsilon(1e-10));
  CHECK(fit2.beta == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("calibration errors") {
  const AnnualSeries t(1900, std::vector<double>(20, 0.1));
  CHECK_THROWS_AS(calibrate_truth(t, AnnualSeries(1900, std::vector<double>(20, 1361.0)), ForcingKind::Tsi),
                  SingularDesignError);
  CHECK_THROWS_AS(calibrate_truth(t.slice(1900, 1908), AnnualSeries(1900, std::vector<double>(20, 1.0)),
                                  ForcingKind::Tsi),
                  InputError);
  CHECK_THROWS_AS(calibrate_truth(t, AnnualSeries(1905, std::vector<double>(20, 1.0)), ForcingKind::Tsi),
                  InputError);
}

TEST_CASE("calibration agrees with an independent OLS and recovers known coefficients") {
  const auto x = oracle::log_co2_like(135);
  int beta_hits = 0, rho_hits = 0;
  for (std::uint32_t seed = 1; seed <= 100; ++seed) {
    const auto y = oracle::ar1_regression(x, 0.0, 2.0, 0.5, 0.1, seed);
    const auto fit = calibrate_truth(AnnualSeries(1880, y), AnnualSeries(1880, x), ForcingKind::LogCo2);
    const auto line = oracle::ols(x, y);
    REQUIRE(fit.beta == doctest::Approx(line.slope).epsilon(1e-8));
    REQUIRE(fit.alpha == doctest::Approx(line.intercept).epsilon(1e-8));
    CHECK(std::abs(fit.rho) < 1.0);
    CHECK(fit.sigma > 0.0);
    beta_hits += std::abs(fit.beta - 2.0) <= 3.0 * fit.beta_se;
    rho_hits += std::abs(fit.rho - 0.5) <= 0.15;
  }
  CHECK(beta_hits >= 95);
  CHECK(rho_hits >= 95);
}
