// Compares the OpenMP lattice-sum kernel with the serial reference.

#include "specialforms/theta.hpp"

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace specialforms;
using namespace specialforms::theta;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

int main(int argc, char** argv) {
    double radius = argc > 1 ? std::atof(argv[1]) : 30.0;
    LatticeCoset L;
    L.basis = {{Rational(1), Rational(0), Rational(0)},
               {Rational(1, 2), Rational(1), Rational(0)},
               {Rational(0), Rational(1, 2), Rational(1)}};
    L.shift = {Rational(1, 3), Rational(0), Rational(1, 7)};
    weil::VarPoly p(3);
    p.add_term({2, 0, 0}, Scalar::one());
    p.add_term({0, 1, 1}, Scalar::integer(3));
    p.add_term({1, 1, 2}, Scalar::rational(Rational(1, 2)));
    p.add_term({0, 0, 4}, Scalar::integer(-2));
    weil::GaussPoly phi(1, 3, p);
    double t = 0.008;  // slow decay: plenty of lattice points

    double t0 = now_ms();
    ThetaValue ser = theta_eval_serial({L}, phi, t, radius);
    double t1 = now_ms();
    ThetaValue par = theta_eval({L}, phi, t, radius);
    double t2 = now_ms();

#ifdef _OPENMP
    std::printf("threads %d\n", omp_get_max_threads());
#else
    std::printf("threads 1 (no OpenMP)\n");
#endif
    std::printf("radius %.1f  points %lld\n", radius, ser.terms);
    std::printf("serial   %10.2f ms   value %.12e\n", t1 - t0, ser.value.real());
    std::printf("parallel %10.2f ms   value %.12e\n", t2 - t1, par.value.real());
    std::printf("speedup  %10.2fx\n", (t1 - t0) / (t2 - t1));
    double diff = std::abs(par.value - ser.value);
    std::printf("difference %.3e (tail bound %.3e)\n", diff, ser.tail);
    return diff < 1e-10 * std::max(1.0, std::abs(ser.value)) ? 0 : 1;
}
