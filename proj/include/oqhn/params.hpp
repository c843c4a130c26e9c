#pragma once

#include <stdexcept>

namespace oqhn {

/// Full parameter set of a simulation: interaction exponent x (even, >= 2),
/// pattern count p, inverse temperature beta and transverse drive omega.
/// Time is measured in units of the dissipator rate.
struct ModelParams {
    int x = 2;
    int p = 1;
    double beta = 1.0;
    double omega = 0.0;

    double temperature() const { return 1.0 / beta; }

    void validate() const {
        if (x < 2 || (x % 2) != 0)
            throw std::invalid_argument("x must be an even integer >= 2");
        if (p < 1) throw std::invalid_argument("p must be >= 1");
        if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
        if (omega < 0.0) throw std::invalid_argument("omega must be >= 0");
    }

    static ModelParams from_beta(int x, int p, double beta, double omega) {
        ModelParams m{x, p, beta, omega};
        m.validate();
        return m;
    }

    static ModelParams from_temperature(int x, int p, double temp, double omega) {
        if (!(temp > 0.0)) throw std::invalid_argument("temperature must be > 0");
        return from_beta(x, p, 1.0 / temp, omega);
    }
};

}  // namespace oqhn
