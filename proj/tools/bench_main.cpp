// Serial-reference vs OpenMP-kernel timings for the O(N^2)-type functionals
// and the extension builder.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "hx/extension.hpp"
#include "hx/harness.hpp"
#include "hx/norms.hpp"
#include "hx/parallel.hpp"
#include "hx/reference.hpp"

namespace {

double time_of(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void row(const std::string& name, double serial, double parallel) {
    std::printf("%-28s %10.1f ms %10.1f ms %8.2fx\n", name.c_str(), 1e3 * serial, 1e3 * parallel,
                serial / parallel);
}

} // namespace

int main() {
    using namespace hx;
    std::printf("threads: %d\n", par::max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    {
        TrialConfig cfg;
        cfg.suite = "bench";
        cfg.dim = 1;
        cfg.grid = 2048;
        const GridFunction f = generate_test_function(cfg, 0, 0);
        row("gagliardo n=1 N=2048", time_of([&] { ref::gagliardo_seminorm(f, 0.4, 2.0); }),
            time_of([&] { gagliardo_seminorm(f, 0.4, 2.0); }));
        row("holder n=1 N=2048", time_of([&] { ref::holder_seminorm(f, 0.5); }),
            time_of([&] { holder_seminorm(f, 0.5); }));
    }
    {
        TrialConfig cfg;
        cfg.suite = "bench";
        cfg.dim = 2;
        cfg.grid = 128;
        const GridFunction f = generate_test_function(cfg, 0, 0);
        row("maximal n=2 N=128", time_of([&] { ref::maximal_function(f); }),
            time_of([&] { maximal_function(f); }));
        row("bmo n=2 N=128", time_of([&] { ref::bmo_seminorm(f); }), time_of([&] { bmo_seminorm(f); }));
        row("holder n=2 N=128", time_of([&] { ref::holder_seminorm(f, 0.5); }),
            time_of([&] { holder_seminorm(f, 0.5); }));
    }
    {
        TrialConfig cfg;
        cfg.suite = "bench";
        cfg.dim = 2;
        cfg.grid = 64;
        const GridFunction f = generate_test_function(cfg, 0, 0);
        row("gagliardo n=2 N=64", time_of([&] { ref::gagliardo_seminorm(f, 0.4, 2.0); }),
            time_of([&] { gagliardo_seminorm(f, 0.4, 2.0); }));

        const TGrid tg = TGrid::standard(f.spec());
        auto op = std::make_shared<const ExtensionOperator>(f.spec(), 1.0, tg);
        ExtensionField E = op->extend(f);
        E.dt(0); // materialize derivative families once
        E.dx(0, 0);
        row("square fn n=2 N=64",
            time_of([&] { ref::square_function(E, DerivSelector::GradX, 0.3); }),
            time_of([&] { square_function(E, DerivSelector::GradX, 0.3); }));
    }
    return 0;
}
