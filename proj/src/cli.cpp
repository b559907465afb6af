#include "smlsom/cli.hpp"

#include "smlsom/io.hpp"
#include "smlsom/metrics.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace smlsom
{

namespace
{

using nlohmann::json;
namespace fs = std::filesystem;

fs::path sibling(const fs::path& path, const std::string& suffix)
{
    fs::path out = path;
    out.replace_filename(path.stem().string() + suffix);
    return out;
}

std::size_t default_jobs()
{
    if (const char* env = std::getenv("SMLSOM_JOBS"))
    {
        char* end        = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0)
            return static_cast<std::size_t>(value);
    }
    return 1;
}

void print_mdl(std::ostream& out, const MdlScore& s)
{
    out << "neg_loglik=" << s.neg_loglik << " complexity=" << s.complexity
        << " indexing=" << s.indexing << " total=" << s.total;
}

json mdl_json(const MdlScore& s)
{
    return {{"neg_loglik", s.neg_loglik},
            {"complexity", s.complexity},
            {"indexing", s.indexing},
            {"total", s.total}};
}

//
// gen
//

struct GenArgs
{
    std::size_t dim        = 2;
    std::size_t components = 2;
    std::size_t n          = 100;
    std::optional<double> omega_bar;
    std::string structure = "spherical-heterogeneous";
    std::vector<double> pi;
    std::uint64_t seed = 1;
    std::string out;
    bool labels      = false;
    std::size_t n_mc = 10000;
};

int cmd_gen(const GenArgs& a, std::ostream& out)
{
    Rng rng(a.seed);
    const auto structure = CovarianceStructure::parse(a.structure);
    MixtureSpec spec     = random_mixture(a.dim, a.components, structure, rng, a.pi);

    json report = {{"seed", a.seed}, {"n", a.n}};
    if (a.omega_bar)
    {
        const auto cal = calibrate_overlap(spec, *a.omega_bar, a.n_mc, rng);
        spec           = cal.spec;
        report["target_omega_bar"]   = *a.omega_bar;
        report["achieved_omega_bar"] = cal.achieved;
        report["scale"]              = cal.scale;
        report["n_mc"]               = a.n_mc;
        out << "omega_bar target=" << *a.omega_bar << " achieved=" << cal.achieved
            << " scale=" << cal.scale << '\n';
    }
    const auto sample = sample_mixture(spec, a.n, rng);

    const fs::path data_path = a.out;
    io::save_dataset(data_path, sample.values, a.labels ? &sample.labels : nullptr);

    io::CsvTable labels;
    labels.header = {"label"};
    for (int l : sample.labels)
        labels.rows.push_back({static_cast<double>(l)});
    io::write_csv(sibling(data_path, ".labels.csv"), labels);

    report["mixture"] = io::mixture_to_json(spec);
    std::ofstream spec_out(sibling(data_path, ".spec.json"), std::ios::binary);
    if (!spec_out)
        throw DataError("cannot write spec next to " + data_path.string());
    spec_out << report.dump(2) << '\n';

    out << "wrote " << a.n << " samples to " << data_path.string() << '\n';
    return 0;
}

//
// fit
//

struct FitArgs
{
    std::string input;
    std::string family  = "gaussian";
    std::size_t rows    = 3;
    std::size_t cols    = 3;
    std::string lattice = "hex";
    double beta         = 15.0;
    std::optional<std::size_t> tau_max;
    std::vector<double> alpha{0.05, 0.01};
    std::optional<double> r1;
    std::string init   = "pca";
    std::uint64_t seed = 1;
    std::size_t restarts = 1;
    std::size_t jobs     = 1;
    std::string out;
    std::string assignment;
};

template <class Family>
int run_fit(const Dataset& data, const FitConfig& config, const FitArgs& a, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> totals;
    const auto fit = fit_best_of<Family>(data, config, a.restarts, a.jobs, &totals);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    io::FitMetadata meta;
    meta.config   = config;
    meta.config.seed = fit.seed;
    meta.schedule = config.schedule_for(data.n());
    meta.restarts = a.restarts;
    meta.n        = data.n();
    meta.mdl      = fit.mdl;
    meta.trace    = fit.trace;

    const fs::path model_path = a.out;
    io::save_model(model_path, io::make_model(config.family, fit, meta, data.p()));
    const fs::path assign_path =
        a.assignment.empty() ? sibling(model_path, ".assignment.csv") : fs::path(a.assignment);
    io::write_assignment(assign_path, fit.assignment);

    out << std::setprecision(12) << "nodes=" << fit.graph.node_count() << ' ';
    print_mdl(out, fit.mdl);
    out << " cycles=" << fit.trace.size() << " seed=" << fit.seed << std::setprecision(3)
        << " time=" << elapsed.count() << "s\n";
    return 0;
}

int cmd_fit(const FitArgs& a, std::ostream& out)
{
    const Dataset data = io::load_dataset(a.input);

    FitConfig config;
    config.family  = family_from_string(a.family);
    config.rows    = a.rows;
    config.cols    = a.cols;
    config.lattice = lattice_kind_from_string(a.lattice);
    config.beta    = a.beta;
    if (a.alpha.size() != 2)
        throw CLI::ValidationError("--alpha", "expects two values: start,end");
    config.alpha0  = a.alpha[0];
    config.alpha1  = a.alpha[1];
    config.r1      = a.r1;
    config.tau_max = a.tau_max;
    config.seed    = a.seed;
    config.init    = init_from_string(a.init);
    config.validate();

    if (config.family == FamilyKind::gaussian)
        return run_fit<GaussianFamily>(data, config, a, out);
    return run_fit<MultinomialFamily>(data, config, a, out);
}

//
// score
//

int cmd_score(const std::string& model_path, const std::string& input, bool as_json,
              std::ostream& out)
{
    const auto model   = io::load_model(model_path);
    const Dataset data = io::load_dataset(input);
    if (data.p() != model.dim)
        throw DataError("model has dimension " + std::to_string(model.dim) + " but data has " +
                        std::to_string(data.p()) + " columns");

    const MdlScore s = std::visit(
        [&](const auto& table) {
            using Params = typename std::decay_t<decltype(table)>::mapped_type;
            using Family = std::conditional_t<std::is_same_v<Params, GaussParams>, GaussianFamily,
                                              MultinomialFamily>;
            if constexpr (std::is_same_v<Family, MultinomialFamily>)
                data.require_counts();
            return mdl_score<Family>(data, classify<Family>(data, table), table);
        },
        model.params);

    if (as_json)
    {
        json j  = mdl_json(s);
        j["nodes"] = model.graph.node_count();
        j["n"]     = data.n();
        out << j.dump(2) << '\n';
    }
    else
    {
        out << std::setprecision(17) << "neg_loglik " << s.neg_loglik << '\n'
            << "complexity " << s.complexity << '\n'
            << "indexing " << s.indexing << '\n'
            << "total " << s.total << '\n';
    }
    return 0;
}

//
// eval
//

int cmd_eval(const std::string& labels_path, const std::string& assignment_path, bool as_json,
             std::ostream& out)
{
    const auto truth = io::read_label_column(labels_path, "label");
    const auto found = io::read_label_column(assignment_path, "node");
    if (truth.size() != found.size())
        throw DataError("labels have " + std::to_string(truth.size()) +
                        " rows but the assignment has " + std::to_string(found.size()));
    const Partition u(truth), v(found);
    const double a = ari(u, v);
    const double m = nmi(u, v);
    if (as_json)
        out << json{{"ari", a}, {"nmi", m}, {"n", truth.size()}}.dump(2) << '\n';
    else
        out << std::setprecision(12) << "ARI " << a << '\n' << "NMI " << m << '\n';
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Self-organizing map clustering with automatic map shrinking", "smlsom"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Simulate a labeled Gaussian mixture dataset");
    g->add_option("--dim", gen.dim, "Dimension")->check(CLI::PositiveNumber);
    g->add_option("--components", gen.components, "Number of mixture components")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    g->add_option("--n", gen.n, "Sample size")->check(CLI::PositiveNumber);
    g->add_option("--omega-bar", gen.omega_bar, "Target average overlap")
        ->check(CLI::Range(0.0, 1.0));
    g->add_option("--structure", gen.structure,
                  "{spherical|nonspherical}-{heterogeneous|homogeneous}");
    g->add_option("--pi", gen.pi, "Mixing probabilities, comma separated")->delimiter(',');
    g->add_option("--seed", gen.seed, "Random seed");
    g->add_option("--out", gen.out, "Output CSV")->required();
    g->add_flag("--labels", gen.labels, "Append a label column to the dataset");
    g->add_option("--n-mc", gen.n_mc, "Monte Carlo draws per component for overlap")
        ->check(CLI::Range(std::size_t{1000}, std::size_t{100000000}));

    FitArgs fit;
    fit.jobs = default_jobs();
    auto* f  = app.add_subcommand("fit", "Fit a shrinking map and select the number of clusters");
    f->add_option("--input", fit.input, "Input CSV")->required()->check(CLI::ExistingFile);
    f->add_option("--family", fit.family, "gaussian or multinomial")
        ->check(CLI::IsMember({"gaussian", "multinomial"}));
    f->add_option("--rows", fit.rows, "Lattice rows")->check(CLI::PositiveNumber);
    f->add_option("--cols", fit.cols, "Lattice columns")->check(CLI::PositiveNumber);
    f->add_option("--lattice", fit.lattice, "rect or hex")
        ->check(CLI::IsMember({"rect", "hex", "rectangular", "hexagonal"}));
    f->add_option("--beta", fit.beta, "Edge hardness")->check(CLI::NonNegativeNumber);
    f->add_option("--tau-max", fit.tau_max, "Training steps per cycle (default n)")
        ->check(CLI::PositiveNumber);
    f->add_option("--alpha", fit.alpha, "Learning rate start,end")->delimiter(',')->expected(2);
    f->add_option("--r1", fit.r1, "Initial neighborhood radius")->check(CLI::PositiveNumber);
    f->add_option("--init", fit.init, "pca or random")->check(CLI::IsMember({"pca", "random"}));
    f->add_option("--seed", fit.seed, "Random seed of the first restart");
    f->add_option("--restarts", fit.restarts, "Independent restarts")->check(CLI::PositiveNumber);
    f->add_option("--jobs", fit.jobs, "Concurrent restarts (default SMLSOM_JOBS or 1)")
        ->check(CLI::PositiveNumber);
    f->add_option("--out", fit.out, "Model JSON")->required();
    f->add_option("--assignment", fit.assignment, "Assignment CSV (default next to the model)");

    std::string model_path, score_input;
    bool score_json = false;
    auto* s = app.add_subcommand("score", "Recompute the description length of a saved model");
    s->add_option("--model", model_path, "Model JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--input", score_input, "Input CSV")->required()->check(CLI::ExistingFile);
    s->add_flag("--json", score_json, "JSON output");

    std::string labels_path, assignment_path;
    bool eval_json = false;
    auto* e = app.add_subcommand("eval", "Compare an assignment with reference labels");
    e->add_option("--labels", labels_path, "Labels CSV")->required()->check(CLI::ExistingFile);
    e->add_option("--assignment", assignment_path, "Assignment CSV")
        ->required()
        ->check(CLI::ExistingFile);
    e->add_flag("--json", eval_json, "JSON output");

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp& ex)
    {
        return app.exit(ex, out, err);
    }
    catch (const CLI::CallForAllHelp& ex)
    {
        return app.exit(ex, out, err);
    }
    catch (const CLI::ParseError& ex)
    {
        app.exit(ex, out, err);
        return 1;
    }

    try
    {
        if (g->parsed())
            return cmd_gen(gen, out);
        if (f->parsed())
            return cmd_fit(fit, out);
        if (s->parsed())
            return cmd_score(model_path, score_input, score_json, out);
        return cmd_eval(labels_path, assignment_path, eval_json, out);
    }
    catch (const CLI::Error& ex)
    {
        err << "error: " << ex.what() << '\n';
        return 1;
    }
    catch (const SingularModelError& ex)
    {
        err << "numerical failure: " << ex.what() << '\n';
        return 3;
    }
    catch (const CalibrationError& ex)
    {
        err << "calibration failed: " << ex.what() << '\n';
        return 3;
    }
    catch (const std::exception& ex)
    {
        err << "error: " << ex.what() << '\n';
        return 2;
    }
}

} // namespace smlsom
