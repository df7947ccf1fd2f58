#pragma once

#include "qhforge/correlators.hpp"
#include "qhforge/descendants.hpp"
#include "qhforge/floer.hpp"
#include "qhforge/strata.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace qhforge::io {

using nlohmann::json;

json rat_to_json(const Rat& r);          // {"num": "...", "den": "..."}
Rat rat_from_json(const json& j);

json model_to_json(const RingModel& m);
RingModel model_from_json(const json& j);

/// Builtin name ("P1".."P3") or a path to a model JSON file.
RingModel load_model(const std::string& name_or_path);

/// One header line plus one JSON object per entry, sorted by key; the
/// rendering is canonical so equal tables serialize to equal bytes.
std::string table_to_jsonl(const CorrelatorTable& table);
CorrelatorTable table_from_jsonl(const std::string& text);

std::string table_cache_filename(const std::string& model, const Rat& cutoff, int version);

/// Writes table_to_jsonl under the cache directory, creating it if needed.
std::string save_table_cache(const std::string& dir, const CorrelatorTable& table);

/// Cache lookup keyed by (model, cutoff, solver version). Misses, version
/// mismatches and unreadable files all come back as nullopt so callers can
/// recompute.
std::optional<CorrelatorTable> load_table_cache(const std::string& dir, const std::string& model,
                                                const Rat& cutoff, int version);

json floer_to_json(const FloerComplex& c);
FloerComplex floer_from_json(const json& j);
FloerComplex load_floer(const std::string& path);

json graphs_to_json(const std::vector<DualGraph>& graphs);

/// Sorted monomial list for golden-file comparison of generating series.
json series_to_json(const GenSeries& series);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace qhforge::io
