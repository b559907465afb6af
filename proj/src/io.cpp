#include "smlsom/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace smlsom::io
{

using nlohmann::json;

namespace
{

std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t\r\"");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\"");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

double parse_number(const std::string& s, std::size_t line)
{
    double v      = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    if (!s.empty() && *b == '+')
        ++b;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (s.empty() || ec != std::errc() || ptr != e)
        throw DataError("line " + std::to_string(line) + ": '" + s + "' is not a number");
    return v;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());
    return out;
}

} // namespace

std::size_t CsvTable::column_or_last(const std::string& name) const
{
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == name)
            return j;
    if (header.empty())
        throw DataError("table has no columns");
    return header.size() - 1;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot read " + path.string());

    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (trim(line).empty())
            continue;
        if (t.header.empty())
        {
            t.header = split(line);
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != t.header.size())
            throw DataError(path.string() + " line " + std::to_string(lineno) + ": expected " +
                            std::to_string(t.header.size()) + " columns, found " +
                            std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells)
            row.push_back(parse_number(c, lineno));
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty())
        throw DataError(path.string() + " has no header row");
    return t;
}

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table)
{
    auto out = open_out(path);
    for (std::size_t j = 0; j < table.header.size(); ++j)
        out << (j ? "," : "") << table.header[j];
    out << '\n';
    for (const auto& row : table.rows)
    {
        for (std::size_t j = 0; j < row.size(); ++j)
            out << (j ? "," : "") << format_double(row[j]);
        out << '\n';
    }
}

Dataset load_dataset(const std::filesystem::path& path)
{
    const auto t = read_csv(path);
    const bool labeled   = t.header.back() == "label";
    const std::size_t p  = t.header.size() - (labeled ? 1 : 0);
    if (p < 1)
        throw DataError(path.string() + " has no feature columns");

    RowMatrix values(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(p));
    std::vector<int> labels;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
    {
        for (std::size_t j = 0; j < p; ++j)
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.rows[i][j];
        if (labeled)
            labels.push_back(static_cast<int>(t.rows[i].back()));
    }
    if (labeled)
        return Dataset(std::move(values), std::move(labels));
    return Dataset(std::move(values));
}

void save_dataset(const std::filesystem::path& path, const RowMatrix& values,
                  const std::vector<int>* labels)
{
    CsvTable t;
    for (Eigen::Index j = 0; j < values.cols(); ++j)
        t.header.push_back("x" + std::to_string(j + 1));
    if (labels)
        t.header.push_back("label");
    for (Eigen::Index i = 0; i < values.rows(); ++i)
    {
        std::vector<double> row(values.row(i).begin(), values.row(i).end());
        if (labels)
            row.push_back((*labels)[static_cast<std::size_t>(i)]);
        t.rows.push_back(std::move(row));
    }
    write_csv(path, t);
}

std::vector<std::int64_t> read_label_column(const std::filesystem::path& path,
                                            const std::string& preferred)
{
    const auto t         = read_csv(path);
    const std::size_t col = t.column_or_last(preferred);
    std::vector<std::int64_t> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows)
        out.push_back(static_cast<std::int64_t>(row[col]));
    return out;
}

void write_assignment(const std::filesystem::path& path, const Assignment& assignment)
{
    auto out = open_out(path);
    out << "index,node\n";
    for (std::size_t i = 0; i < assignment.size(); ++i)
        out << i << ',' << assignment[i] << '\n';
}

//
// JSON
//

namespace
{

json vec_json(const Vector& v)
{
    return json(std::vector<double>(v.begin(), v.end()));
}

json mat_json(const Matrix& m)
{
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            flat.push_back(m(r, c));
    return flat;
}

Vector vec_from(const json& j, std::size_t dim)
{
    const auto v = j.get<std::vector<double>>();
    if (v.size() != dim)
        throw DataError("vector has length " + std::to_string(v.size()) + ", expected " +
                        std::to_string(dim));
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Matrix mat_from(const json& j, std::size_t dim)
{
    const auto v = j.get<std::vector<double>>();
    if (v.size() != dim * dim)
        throw DataError("matrix has " + std::to_string(v.size()) + " entries, expected " +
                        std::to_string(dim * dim));
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r * dim + c];
    return m;
}

json mdl_json(const MdlScore& s)
{
    return {{"neg_loglik", s.neg_loglik},
            {"complexity", s.complexity},
            {"indexing", s.indexing},
            {"total", s.total}};
}

MdlScore mdl_from(const json& j)
{
    return {j.at("neg_loglik").get<double>(), j.at("complexity").get<double>(),
            j.at("indexing").get<double>(), j.at("total").get<double>()};
}

} // namespace

json to_json(const ModelFile& model)
{
    json nodes = json::array();
    std::visit(
        [&](const auto& table) {
            for (const auto& [id, theta] : table)
            {
                json node = {{"id", id}};
                if constexpr (std::is_same_v<std::decay_t<decltype(theta)>, GaussParams>)
                {
                    node["mean"]       = vec_json(theta.mean());
                    node["covariance"] = mat_json(theta.covariance());
                }
                else
                    node["theta"] = vec_json(theta.theta());
                nodes.push_back(std::move(node));
            }
        },
        model.params);

    json edges = json::array();
    for (const auto& e : model.graph.edges())
        edges.push_back({e.a, e.b});

    const auto& m = model.meta;
    json trace    = json::array();
    for (const auto& r : m.trace)
        trace.push_back({{"cycle", r.cycle},
                         {"nodes", r.nodes},
                         {"edges", r.edges},
                         {"edges_cut", r.edges_cut},
                         {"deleted", r.deleted ? json(*r.deleted) : json(nullptr)},
                         {"mdl_before", r.mdl_before},
                         {"mdl", r.mdl}});

    json fit = {
        {"beta", m.config.beta},
        {"lattice",
         {{"rows", m.config.rows}, {"cols", m.config.cols}, {"kind", to_string(m.config.lattice)}}},
        {"schedule",
         {{"alpha0", m.schedule.alpha0},
          {"alpha1", m.schedule.alpha1},
          {"r1", m.schedule.r1},
          {"tau_max", m.schedule.tau_max}}},
        {"seed", m.config.seed},
        {"init", to_string(m.config.init)},
        {"restarts", m.restarts},
        {"n", m.n},
        {"mdl", mdl_json(m.mdl)},
        {"cycles", m.trace.size()},
        {"trace", std::move(trace)}};

    return {{"format_version", kFormatVersion},
            {"family", to_string(model.family)},
            {"dim", model.dim},
            {"capacity", model.graph.capacity()},
            {"nodes", std::move(nodes)},
            {"edges", std::move(edges)},
            {"fit", std::move(fit)}};
}

ModelFile model_from_json(const json& j)
{
    try
    {
        if (j.at("format_version").get<int>() != kFormatVersion)
            throw DataError("unsupported model format version");
        ModelFile model;
        model.family = family_from_string(j.at("family").get<std::string>());
        model.dim    = j.at("dim").get<std::size_t>();

        std::vector<NodeId> ids;
        if (model.family == FamilyKind::gaussian)
        {
            NodeParamsTable<GaussParams> table;
            for (const auto& node : j.at("nodes"))
            {
                const auto id = node.at("id").get<NodeId>();
                table.emplace(id, GaussParams(vec_from(node.at("mean"), model.dim),
                                              mat_from(node.at("covariance"), model.dim)));
                ids.push_back(id);
            }
            model.params = std::move(table);
        }
        else
        {
            NodeParamsTable<MultinomParams> table;
            for (const auto& node : j.at("nodes"))
            {
                const auto id = node.at("id").get<NodeId>();
                table.emplace(id, MultinomParams(vec_from(node.at("theta"), model.dim)));
                ids.push_back(id);
            }
            model.params = std::move(table);
        }
        if (ids.empty())
            throw DataError("model has no nodes");

        std::size_t capacity = j.value("capacity", std::size_t{0});
        for (NodeId id : ids)
            capacity = std::max<std::size_t>(capacity, id + 1);
        model.graph = MapGraph(capacity);
        for (std::size_t k = 0; k < capacity; ++k)
            if (std::find(ids.begin(), ids.end(), static_cast<NodeId>(k)) == ids.end())
                model.graph.remove_node(static_cast<NodeId>(k));
        for (const auto& e : j.at("edges"))
        {
            const auto a = e.at(0).get<NodeId>();
            const auto b = e.at(1).get<NodeId>();
            if (!model.graph.is_live(a) || !model.graph.is_live(b))
                throw DataError("edge refers to an unknown node");
            model.graph.add_edge(a, b);
        }

        if (j.contains("fit"))
        {
            const auto& f     = j.at("fit");
            auto& meta        = model.meta;
            meta.config.family = model.family;
            meta.config.beta   = f.at("beta").get<double>();
            meta.config.rows   = f.at("lattice").at("rows").get<std::size_t>();
            meta.config.cols   = f.at("lattice").at("cols").get<std::size_t>();
            meta.config.lattice =
                lattice_kind_from_string(f.at("lattice").at("kind").get<std::string>());
            meta.schedule.alpha0  = f.at("schedule").at("alpha0").get<double>();
            meta.schedule.alpha1  = f.at("schedule").at("alpha1").get<double>();
            meta.schedule.r1      = f.at("schedule").at("r1").get<double>();
            meta.schedule.tau_max = f.at("schedule").at("tau_max").get<std::size_t>();
            meta.config.alpha0    = meta.schedule.alpha0;
            meta.config.alpha1    = meta.schedule.alpha1;
            meta.config.r1        = meta.schedule.r1;
            meta.config.tau_max   = meta.schedule.tau_max;
            meta.config.seed      = f.at("seed").get<std::uint64_t>();
            meta.config.init      = init_from_string(f.at("init").get<std::string>());
            meta.restarts         = f.at("restarts").get<std::size_t>();
            meta.n                = f.at("n").get<std::size_t>();
            meta.mdl              = mdl_from(f.at("mdl"));
            for (const auto& r : f.at("trace"))
            {
                TraceRecord rec;
                rec.cycle     = r.at("cycle").get<std::size_t>();
                rec.nodes     = r.at("nodes").get<std::size_t>();
                rec.edges     = r.at("edges").get<std::size_t>();
                rec.edges_cut = r.at("edges_cut").get<std::size_t>();
                if (!r.at("deleted").is_null())
                    rec.deleted = r.at("deleted").get<NodeId>();
                rec.mdl_before = r.at("mdl_before").get<double>();
                rec.mdl        = r.at("mdl").get<double>();
                meta.trace.push_back(rec);
            }
        }
        return model;
    }
    catch (const json::exception& e)
    {
        throw DataError(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const ModelFile& model)
{
    auto out = open_out(path);
    out << to_json(model).dump(2) << '\n';
}

ModelFile load_model(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot read " + path.string());
    json j;
    try
    {
        in >> j;
    }
    catch (const json::exception& e)
    {
        throw DataError(path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

json mixture_to_json(const MixtureSpec& spec)
{
    json means = json::array();
    json covs  = json::array();
    for (std::size_t k = 0; k < spec.components(); ++k)
    {
        means.push_back(vec_json(spec.means[k]));
        covs.push_back(mat_json(spec.covariances[k]));
    }
    return {{"format_version", kFormatVersion},
            {"dim", spec.dim()},
            {"components", spec.components()},
            {"structure", spec.structure.to_string()},
            {"pi", spec.pi},
            {"means", std::move(means)},
            {"covariances", std::move(covs)}};
}

MixtureSpec mixture_from_json(const json& j)
{
    try
    {
        MixtureSpec spec;
        const auto dim = j.at("dim").get<std::size_t>();
        spec.structure = CovarianceStructure::parse(j.at("structure").get<std::string>());
        spec.pi        = j.at("pi").get<std::vector<double>>();
        for (const auto& m : j.at("means"))
            spec.means.push_back(vec_from(m, dim));
        for (const auto& c : j.at("covariances"))
            spec.covariances.push_back(mat_from(c, dim));
        spec.validate();
        return spec;
    }
    catch (const json::exception& e)
    {
        throw DataError(std::string("malformed mixture spec: ") + e.what());
    }
}

} // namespace smlsom::io
