#pragma once

#include <qal/dynamics.hpp>

#include <string>

namespace fixtures {

// Superstable parameter of period k near a decimal approximation good to about 25 digits.
inline qal::ParamOracle center_near(int k, const std::string& approx) {
    using namespace qal;
    Dyadic c = Dyadic::parse_rounded(approx, 96);
    Dyadic h = dy_pow2(-60);
    auto pred = [k](const DyadicInterval& C, const Precision& p) { return sign_of(critical_orbit(C, k, p).steps.back()); };
    ParamFacts f;
    f.superstable_period = k;
    return oracle_bisect(pred, DyadicInterval(c - h, c + h), f, "center:" + std::to_string(k));
}

inline qal::ParamOracle s3() { return center_near(3, "-1.754877666246692760049508896"); }

inline const char* eps_center(int n) {
    static const char* table[] = {"-1.625413725123303737443411", "-1.71107947001315214983242",
                                  "-1.73200627286965613498262",  "-1.73971760145146326434737",
                                  "-1.743337832934502697210926", "-1.745319624446059697706689"};
    return table[n - 1];
}

inline qal::ParamOracle eps(int n) { return center_near(3 * n + 2, eps_center(n)); }

}  // namespace fixtures
