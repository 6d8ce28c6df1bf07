#pragma once

#include "oclust/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace oclust {

// One stream item: planar survey position, feature vector and an optional
// ground-truth class id (never shown to the engine).
struct Observation {
    std::string id;
    double x = 0.0;   // easting, m
    double y = 0.0;   // northing, m
    std::optional<int> label;
    Vector feature;
};

// Dataset CSV: header `id,x,y,label,f0,...,f{d-1}`; empty label field for
// unlabeled rows; d inferred from the header.
std::vector<Observation> load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const std::vector<Observation>& obs);

enum class Axis { WE, NS };

// Boustrophedon raster: points binned into parallel tracks of width
// track_spacing across the survey axis, tracks visited in order with
// alternating direction. track_spacing <= 0 uses extent / 20.
std::vector<Observation> order_lawnmower(std::vector<Observation> obs, Axis axis,
                                         double track_spacing = 0.0);

// Short point-to-point transects between uniform random waypoints; each point
// is emitted with its nearest transect segment, ordered along the segment.
std::vector<Observation> order_random_waypoints(std::vector<Observation> obs,
                                                int n_waypoints, std::uint64_t seed);

struct SynthConfig {
    int n_classes = 5;
    std::int64_t n_points = 20000;
    std::vector<double> class_proportions;   // empty -> uniform
    enum class Layout { Grid, Voronoi } patch_layout = Layout::Grid;
    double feature_separation = 8.0;         // min inter-class mean distance, in noise units
    double feature_noise = 1.0;
    int d = 16;
    std::uint64_t seed = 1;

    // Optional plant: `bimodal_class` emits from two feature modes. The
    // second mode sits bimodal_gap * feature_noise away from the partner
    // class's mean and occupies the patches visited last by a WE raster, so
    // it surfaces only late in the stream.
    int bimodal_class = -1;
    int bimodal_partner = -1;
    double bimodal_gap = 3.4;
    double bimodal_noise_scale = 1.0;

    int grid_cells = 0;   // cells per grid side; 0 -> auto
};

// Spatially structured labeled dataset. Classes own contiguous patch runs of
// the domain; features are isotropic Gaussians around mutually separated
// class means. Throws std::runtime_error when the separation constraint
// cannot be met for the requested d.
std::vector<Observation> synth_generate(const SynthConfig& cfg);

// Feature rows of a dataset as an n x d matrix.
PointMatrix feature_matrix(const std::vector<Observation>& obs);

}  // namespace oclust
