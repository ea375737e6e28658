#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tsadam/optim.hpp"
#include "tsadam/train.hpp"

namespace tsadam::config {

// Line-oriented `key = value` configuration with [section] headers and
// '#' comment lines. Parsing is purely structural; semantic validation
// (allowed sections/keys, typed values) happens during conversion.
using Section = std::map<std::string, std::string>;
using Document = std::map<std::string, Section>;

Document parse_string(const std::string& text, const std::string& source);
Document parse_file(const std::string& path);

// One experiment description plus the list of optimizers to compare.
struct TrainSetup {
    train::ExperimentConfig base;            // optimizer field = first of the list
    std::vector<std::string> optimizer_names;
    std::vector<optim::OptimizerSpec> optimizers;
};

// Converts a parsed document, rejecting unknown sections or keys with a
// message listing the valid ones.
TrainSetup train_setup(const Document& doc);

// Series description from the [series] section (defaults when absent).
synth::SeriesSpec series_spec(const Document& doc);

// Optimizer names accept a `_dagger` suffix for the corrected-off variants,
// e.g. "adamw_dagger"; "tsadam" is Adam without the second-order correction.
optim::OptimizerSpec optimizer_spec_for(const std::string& name, const Document& doc);

std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace tsadam::config
