#pragma once

// Shared simulation pipeline for the experiment subcommands and checks:
// truth signal, fBs observation noise, observation field, whitened increments.
// Internal to the library.

#include "fracfilt/config.hpp"
#include "fracfilt/model.hpp"
#include "fracfilt/rng.hpp"

namespace ff::harness {

struct World {
    lattice::Grid2D grid;
    gauss::HurstPair hurst;
    double x0_true;
    lattice::SampledField2D x_true;
    gauss::GaussianFieldSample noise_driver;  // W^B, the driver of the fBs noise
    gauss::GaussianFieldSample noise_fbs;     // B^{alpha,beta}
    lattice::SampledField2D y;                // observation
    model::DeltaField delta_true;
    Matrix wy_inc;                            // whitened-observation increments
};

inline World simulate_world(const ExperimentConfig& cfg) {
    auto grid = cfg.make_grid();
    auto H = cfg.make_hurst();
    auto sensor = cfg.make_sensor();

    auto gen1 = rng::stream(cfg.master_seed, rng::kStreamSignalSheet);
    double x0 = cfg.make_x0_sampler()(gen1);
    auto w_signal = gauss::simulate_wiener_sheet(grid, gen1);
    model::SdeCoefficients coeffs{cfg.make_drift(), cfg.make_diffusion(), x0};
    auto x_true = model::simulate_signal(coeffs, w_signal, grid);

    auto gen2 = rng::stream(cfg.master_seed, rng::kStreamNoiseSheet);
    auto driver = gauss::simulate_wiener_sheet(grid, gen2);
    auto noise = gauss::simulate_fbs_kernel(grid, H, driver);

    auto y = model::make_observation(x_true, sensor, noise);
    auto delta_true = model::delta_2d(x_true, sensor, H);

    Matrix wy(grid.n1(), grid.n2());
    if (cfg.wy_source == "whiten") {
        auto wsample = gauss::whiten(gauss::GaussianFieldSample::from_cumulative(y), H);
        wy = wsample.increments.values;
    } else {
        for (std::size_t i = 0; i < grid.n1(); ++i)
            for (std::size_t j = 0; j < grid.n2(); ++j)
                wy(i, j) = delta_true.values.values(i, j) * grid.cell_area(i, j) +
                           driver.increments.values(i, j);
    }
    return {grid,
            H,
            x0,
            std::move(x_true),
            std::move(driver),
            std::move(noise),
            std::move(y),
            std::move(delta_true),
            std::move(wy)};
}

inline filter::EnsembleSpec ensemble_spec(const ExperimentConfig& cfg) {
    return {cfg.make_drift(), cfg.make_diffusion(), cfg.make_x0_sampler(), cfg.make_sensor()};
}

} // namespace ff::harness
