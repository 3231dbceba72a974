#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mdlgraph/graph.hpp"

#include <nlohmann/json_fwd.hpp>

namespace mdlgraph {

/// A batch of graph samples drawn for one input, plus provenance.
/// Samples that failed to parse are recorded in `rejects` instead of
/// occupying a slot; T is the number of usable samples.
struct SampleSet {
    struct Reject {
        int index = 0;
        std::string reason;

        bool operator==(const Reject&) const = default;
    };

    std::vector<Graph> samples;
    std::uint64_t seed = 0;
    double temperature = 0.0;
    std::string prompt_hash;
    std::vector<Reject> rejects;

    int size() const { return static_cast<int>(samples.size()); }

    bool operator==(const SampleSet&) const = default;
};

nlohmann::ordered_json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

nlohmann::ordered_json sample_set_to_json(const SampleSet& s);
SampleSet sample_set_from_json(const nlohmann::json& j);

/// File I/O. Writers emit UTF-8 with a stable field order; readers
/// throw IoError on filesystem failures and SchemaError (naming the
/// offending field) on malformed documents.
Graph read_graph(const std::filesystem::path& path);
void write_graph(const Graph& g, const std::filesystem::path& path);
SampleSet read_samples(const std::filesystem::path& path);
void write_samples(const SampleSet& s, const std::filesystem::path& path);

} // namespace mdlgraph
