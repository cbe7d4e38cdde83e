#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/gradexp.hpp"

using namespace casimir;

TEST_CASE("beta model with zero beta vanishes") {
    const auto p = AlphaProvider::beta_model(0.0);
    for (double d : {50.0, 130.0, 900.0})
        CHECK(alpha(p, d, Material::drude(9.0, 0.035), Environment::at_temperature(300.0)) == 0.0);
}

TEST_CASE("beta model with unit beta equals the plate energy") {
    const auto p = AlphaProvider::beta_model(1.0);
    const double a = alpha(p, 100.0, Material::ideal_metal(), Environment::zero_temperature());
    const double d = 100.0 * units::nm;
    CHECK(a == doctest::Approx(-constants::pi * constants::pi * constants::hbar * constants::c / (720.0 * d * d * d))
                   .epsilon(1e-6));
    CHECK(a == doctest::Approx(-4.333e-7).epsilon(1e-3));
}

TEST_CASE("beta model keeps the sign of the energy") {
    const auto p = AlphaProvider::beta_model(0.67);
    CHECK(p.beta() == 0.67);
    CHECK(alpha(p, 130.0, Material::drude(9.0, 0.035), Environment::at_temperature(300.0)) < 0.0);
    CHECK(AlphaProvider::beta_model().beta() == 0.67);
}

TEST_CASE("tabulated alpha reproduces its knots") {
    const std::vector<double> d{100.0, 200.0, 300.0, 400.0};
    const std::vector<double> a{-1e-7, -2e-8, -6e-9, -2.5e-9};
    const auto p = AlphaProvider::tabulated(d, a);
    for (std::size_t i = 0; i < d.size(); ++i)
        CHECK(alpha(p, d[i], Material::ideal_metal(), Environment::zero_temperature()) == a[i]);
    CHECK(alpha(p, 100.0, Material::ideal_metal(), Environment::zero_temperature()) == -1e-7);
}

TEST_CASE("tabulated alpha never extrapolates") {
    const auto p = AlphaProvider::tabulated({100.0, 200.0, 300.0, 400.0}, {-1e-7, -2e-8, -6e-9, -2.5e-9});
    CHECK_THROWS_AS(alpha(p, 99.0, Material::ideal_metal(), Environment::zero_temperature()), RangeError);
    CHECK_THROWS_AS(alpha(p, 401.0, Material::ideal_metal(), Environment::zero_temperature()), RangeError);
    CHECK_THROWS_AS(AlphaProvider::tabulated({100.0, 200.0}, {-1e-7, -2e-8}), DomainError);
    CHECK_THROWS_AS(AlphaProvider::tabulated({100.0, 300.0, 200.0, 400.0}, {-1e-7, -2e-8, -6e-9, -2.5e-9}),
                    DomainError);
}

TEST_CASE("alpha table files") {
    std::istringstream in("# d_nm alpha\n100 -1e-7\n200, -2e-8\n300 -6e-9\n\n400 -2.5e-9\n");
    const auto p = AlphaProvider::parse_table(in);
    CHECK(p.kind() == AlphaProvider::Kind::tabulated);
    CHECK(p.table().knots_x().size() == 4);
    CHECK(alpha(p, 200.0, Material::ideal_metal(), Environment::zero_temperature()) == -2e-8);
    std::istringstream bad("100 -1e-7 3\n");
    CHECK_THROWS_AS(AlphaProvider::parse_table(bad), ConfigError);
    CHECK_THROWS_AS(AlphaProvider::beta_model(0.5).table(), UnsupportedOperation);
    CHECK_THROWS_AS(p.beta(), UnsupportedOperation);
}
