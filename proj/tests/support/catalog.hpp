#pragma once

// Shared catalog of functions with known class membership, used across the
// test suites. yes/no/skip per class; "skip" marks cases a finite kernel
// battery is not asked to decide.

#include <string>
#include <vector>

#include "opfunc/certify.hpp"
#include "opfunc/expr.hpp"
#include "opfunc/interval.hpp"

namespace optest {

enum Expect { No = 0, Yes = 1, Skip = -1 };

struct CatalogEntry {
    std::string name;
    opfunc::FuncExpr f;
    opfunc::Interval j;
    Expect om, oc, soc;
};

inline std::vector<CatalogEntry> catalog() {
    using namespace opfunc;
    const FuncExpr t = identity();
    const Interval pos(0.0, kInf);
    const Interval unit(0.0, 1.0);
    const Interval sym(-1.0, 1.0);
    const Interval tanj(-M_PI_2, M_PI_2);
    return {
        {"tan t", tan(t), tanj, Yes, No, No},
        {"tan t / t", divided_difference(tan(t), 0.0), tanj, No, Yes, Yes},
        {"t^0.5", pow(t, 0.5), pos, Yes, No, No},
        {"log t", log(t), pos, Yes, No, No},
        {"1/t on (0,inf)", 1.0 / t, pos, No, Yes, Yes},
        {"1/t on (0,1)", 1.0 / t, unit, No, Yes, Yes},
        {"1/t - 1", 1.0 / t - 1.0, unit, No, Yes, No},
        {"(t+1)/t", (t + 1.0) / t, pos, No, Yes, Yes},
        {"t on (-1,1)", t, sym, Yes, Yes, No},
        {"t on (0,1)", t, unit, Yes, Yes, No},
        {"t^2 on (-1,1)", pow(t, 2.0), sym, No, Yes, No},
        {"t^2 on (0,1)", pow(t, 2.0), unit, No, Yes, No},
        {"t^3", pow(t, 3.0), Interval(0.0, 10.0), No, No, No},
        {"exp t", exp(t), Interval(0.0, 2.0), No, No, No},
        {"-1/t", -(1.0 / t), pos, Yes, No, No},
        {"1/t^2", pow(t, -2.0), pos, No, No, No},
        {"const 2", constant(2.0), sym, Yes, Yes, Yes},
    };
}

/// Trimmed configuration for the per-module test loops; the acceptance suite
/// runs the library defaults.
inline opfunc::CertifyConfig quick_config(std::uint64_t seed = 1) {
    opfunc::CertifyConfig cfg;
    cfg.grid_sizes = {4, 8};
    cfg.t0_probes = 3;
    cfg.random_grids = 1;
    cfg.seed = seed;
    return cfg;
}

}  // namespace optest
