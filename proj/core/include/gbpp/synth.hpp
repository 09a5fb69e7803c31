#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gbpp/core.hpp"

namespace gbpp::synth {

/// Gaussian mixture component: `count` points around `center` with isotropic
/// standard deviation `sd`, labeled `label`.
struct Blob {
    std::vector<double> center;
    double sd = 1.0;
    int count = 0;
    int label = 0;
};

Dataset make_blobs(const std::vector<Blob>& blobs, std::uint64_t seed,
                   const std::string& name);

/// Two interleaved half-moon arcs in 2-D.
Dataset make_moons(int count0, int count1, double noise_sd, std::uint64_t seed,
                   const std::string& name);

// Deterministic stand-ins mirroring the shapes (rows, features, classes and
// class balance) of classic benchmark sets, with class overlap tuned so that
// a plain kNN baseline lands near its published accuracy on the originals.
Dataset make_fourclass(std::uint64_t seed = 7);  // 862 x 2, 2 classes
Dataset make_svmguide1(std::uint64_t seed = 7);  // 7089 x 4, 2 classes
Dataset make_sonar(std::uint64_t seed = 7);      // 208 x 60, 2 classes
Dataset make_ecoli(std::uint64_t seed = 7);      // 336 x 7, 8 classes
Dataset make_diabetes(std::uint64_t seed = 7);   // 768 x 8, 2 classes

/// Lookup by dataset name ("fourclass", "svmguide1", "sonar", "ecoli",
/// "diabetes"). Throws std::invalid_argument for unknown names.
Dataset by_name(const std::string& name, std::uint64_t seed = 7);

std::vector<std::string> known_names();

}  // namespace gbpp::synth
