#pragma once

#include "smlsom/datagen.hpp"
#include "smlsom/driver.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace smlsom::io
{

inline constexpr int kFormatVersion = 1;

struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of the named column, or of the last column when absent.
    std::size_t column_or_last(const std::string& name) const;
};

/// Header row required; every other cell must parse as a number.
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Loads numeric columns; a trailing column named "label" becomes the labels.
Dataset load_dataset(const std::filesystem::path& path);

void save_dataset(const std::filesystem::path& path, const RowMatrix& values,
                  const std::vector<int>* labels);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

std::vector<std::int64_t> read_label_column(const std::filesystem::path& path,
                                            const std::string& preferred);

void write_assignment(const std::filesystem::path& path, const Assignment& assignment);

//
// Model files
//

using AnyParams = std::variant<NodeParamsTable<GaussParams>, NodeParamsTable<MultinomParams>>;

struct FitMetadata
{
    FitConfig config;
    Schedule schedule;
    std::size_t restarts = 1;
    std::size_t n        = 0;
    MdlScore mdl;
    std::vector<TraceRecord> trace;
};

struct ModelFile
{
    FamilyKind family = FamilyKind::gaussian;
    std::size_t dim   = 0;
    AnyParams params;
    MapGraph graph;
    FitMetadata meta;
};

nlohmann::json to_json(const ModelFile& model);
ModelFile model_from_json(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

template <class Params>
ModelFile make_model(FamilyKind family, const FitResult<Params>& fit, const FitMetadata& meta,
                     std::size_t dim)
{
    ModelFile m;
    m.family = family;
    m.dim    = dim;
    m.params = fit.params;
    m.graph  = fit.graph;
    m.meta   = meta;
    return m;
}

nlohmann::json mixture_to_json(const MixtureSpec& spec);
MixtureSpec mixture_from_json(const nlohmann::json& j);

} // namespace smlsom::io
