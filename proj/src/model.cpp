#include "tmcrf/model.hpp"

#include "tmcrf/errors.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace tmcrf {

namespace {

constexpr std::string_view kMagic = "tmcrf-model";

std::string hex64(std::uint64_t v)
{
    std::array<char, 17> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + 16, v, 16);
    (void)ec;
    std::string s(buf.data(), ptr);
    return std::string(16 - s.size(), '0') + s;
}

[[noreturn]] void bad_model(const std::string& what)
{
    throw Error(ErrorCode::IncompatibleModel, what);
}

std::string expect_line(std::istream& in, std::string_view prefix)
{
    std::string line;
    if (!std::getline(in, line) || !line.starts_with(prefix)) {
        bad_model("expected '" + std::string(prefix) + "' header line");
    }
    return line.substr(prefix.size());
}

} // namespace

std::string format_double(double v)
{
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general);
    (void)ec;
    return {buf.data(), ptr};
}

void check_model(const CrfModel& model)
{
    if (static_cast<std::size_t>(model.lambda.size()) != model.index.size()) {
        throw Error(ErrorCode::NumericalFailure, "weight vector length does not match the feature index");
    }
    if (!model.lambda.allFinite()) {
        throw Error(ErrorCode::NumericalFailure, "model weights are not finite");
    }
}

void build_trellis(const CompiledSequence& seq, const FeatureIndex& index, const StateTopology& topo,
                   const Eigen::VectorXd& lambda, Trellis<double>& out)
{
    const auto n = seq.length();
    const auto L = static_cast<Eigen::Index>(topo.size());
    const auto& ctx = index.contexts();
    constexpr double ninf = kNegInf<double>;

    if (out.start.size() != L) {
        out.start.resize(L);
        out.stop.resize(L);
    }
    out.log_psi.resize(n - 1);
    for (auto& m : out.log_psi) {
        if (m.rows() != L || m.cols() != L) {
            m.resize(L, L);
        }
    }
    for (Eigen::Index s = 0; s < L; ++s) {
        out.stop(s) = topo.allowed_end(static_cast<StateId>(s)) ? 0.0 : ninf;
    }

    std::array<std::vector<double>, kContextSpaceCount> acc;
    for (std::size_t sp = 0; sp < kContextSpaceCount; ++sp) {
        acc[sp].assign(ctx.count(static_cast<ContextSpace>(sp)), 0.0);
    }
    constexpr std::array kUnigramSpaces = {ContextSpace::State, ContextSpace::Binary, ContextSpace::ShortLoop,
                                           ContextSpace::Family};
    Eigen::VectorXd node(L);

    for (std::size_t i = 0; i < n; ++i) {
        for (auto& a : acc) {
            std::fill(a.begin(), a.end(), 0.0);
        }
        for (auto pred : seq.at(i)) {
            auto& a = acc[static_cast<std::size_t>(index.space(pred))];
            for (const auto& cf : index.features_of(pred)) {
                a[static_cast<std::size_t>(cf.context)] += lambda[cf.feature];
            }
        }
        for (Eigen::Index s = 0; s < L; ++s) {
            double v = 0.0;
            for (auto space : kUnigramSpaces) {
                const int c = ctx.of_state(space, static_cast<StateId>(s));
                if (c >= 0) {
                    v += acc[static_cast<std::size_t>(space)][static_cast<std::size_t>(c)];
                }
            }
            node(s) = v;
        }
        if (i == 0) {
            for (Eigen::Index s = 0; s < L; ++s) {
                out.start(s) = topo.allowed_start(static_cast<StateId>(s)) ? node(s) : ninf;
            }
            continue;
        }
        const auto& pair_acc = acc[static_cast<std::size_t>(ContextSpace::StatePair)];
        const auto& change_acc = acc[static_cast<std::size_t>(ContextSpace::BinaryChange)];
        auto& psi = out.edge(i);
        for (Eigen::Index s = 0; s < L; ++s) {
            for (Eigen::Index p = 0; p < L; ++p) {
                const auto sp = static_cast<StateId>(p);
                const auto ss = static_cast<StateId>(s);
                const int pc = ctx.of_transition(ContextSpace::StatePair, sp, ss);
                if (pc < 0) {
                    psi(p, s) = ninf;
                    continue;
                }
                double v = node(s) + pair_acc[static_cast<std::size_t>(pc)];
                const int cc = ctx.of_transition(ContextSpace::BinaryChange, sp, ss);
                if (cc >= 0) {
                    v += change_acc[static_cast<std::size_t>(cc)];
                }
                psi(p, s) = v;
            }
        }
    }
}

CompiledSequence compile_record(const ProteinRecord& record, const CrfModel& model)
{
    return compile(enumerate_predicates(record, model.config), model.index);
}

Trellis<double> build_trellis(const ProteinRecord& record, const CrfModel& model)
{
    Trellis<double> t;
    build_trellis(compile_record(record, model), model.index, model.topology, model.lambda, t);
    return t;
}

double sequence_log_prob(const ProteinRecord& record, std::span<const StateId> path, const CrfModel& model)
{
    if (path.size() != record.size() || !is_admissible(path, model.topology)) {
        throw Error(ErrorCode::InfeasiblePath, "label path is not admissible for record '" + record.id() + "'");
    }
    const auto t = build_trellis(record, model);
    return path_score(t, path) - forward_backward(t).log_z;
}

Decoding decode(const ProteinRecord& record, const CrfModel& model)
{
    const auto t = build_trellis(record, model);
    auto v = viterbi(t);
    auto labels = project(v.path, model.topology);
    return {std::move(v.path), std::move(labels), v.score};
}

std::vector<double> helix_marginals(const ProteinRecord& record, const CrfModel& model)
{
    const auto t = build_trellis(record, model);
    const auto m = marginals(forward_backward(t), t);
    std::vector<double> out(record.size(), 0.0);
    for (std::size_t s = 0; s < model.topology.size(); ++s) {
        if (model.topology.projection(static_cast<StateId>(s)) != Label::Helix) {
            continue;
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += m.node(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i));
        }
    }
    for (auto& p : out) {
        p = std::clamp(p, 0.0, 1.0);
    }
    return out;
}

void write_model(std::ostream& out, const CrfModel& model)
{
    check_model(model);
    out << kMagic << ' ' << kModelFormatVersion << '\n';
    out << "config-hash " << hex64(config_hash(model.config)) << '\n';
    out << "features " << model.index.size() << '\n';
    out << "topology " << topology_name(model.topology.kind()) << '\n';
    out << "config-begin\n" << dump_feature_config(model.config) << "config-end\n";
    for (std::size_t f = 0; f < model.index.size(); ++f) {
        out << model.index.row(static_cast<FeatureId>(f)) << '\t'
            << format_double(model.lambda[static_cast<Eigen::Index>(f)]) << '\n';
    }
}

CrfModel read_model(std::istream& in)
{
    const auto version = expect_line(in, std::string(kMagic) + " ");
    if (version != std::to_string(kModelFormatVersion)) {
        bad_model("unsupported model format version " + version);
    }
    const auto hash = expect_line(in, "config-hash ");
    const auto count_text = expect_line(in, "features ");
    const auto topo_text = expect_line(in, "topology ");
    expect_line(in, "config-begin");

    CrfModel model;
    std::string line;
    while (true) {
        if (!std::getline(in, line)) {
            bad_model("unterminated config block");
        }
        if (line == "config-end") {
            break;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos
            || !set_feature_option(model.config, std::string_view(line).substr(0, eq),
                                   std::string_view(line).substr(eq + 1))) {
            bad_model("bad config line '" + line + "'");
        }
    }
    if (hex64(config_hash(model.config)) != hash) {
        bad_model("feature configuration hash mismatch");
    }
    const auto kind = topology_from_name(topo_text);
    if (!kind || *kind != model.config.resolve_topology()) {
        bad_model("topology '" + topo_text + "' does not match the configuration");
    }
    model.topology = StateTopology::of_kind(*kind);

    std::stringstream rows;
    std::vector<double> weights;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos) {
            bad_model("bad feature row '" + line + "'");
        }
        double w = 0.0;
        auto [ptr, ec] = std::from_chars(line.data() + tab + 1, line.data() + line.size(), w);
        if (ec != std::errc{} || ptr != line.data() + line.size()) {
            bad_model("bad weight in row '" + line + "'");
        }
        weights.push_back(w);
        rows << std::string_view(line).substr(0, tab) << '\n';
    }
    model.index = FeatureIndex::read(rows, model.topology);
    if (std::to_string(model.index.size()) != count_text) {
        bad_model("feature count mismatch");
    }
    model.lambda = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
    check_model(model);
    return model;
}

void save_model(const std::filesystem::path& path, const CrfModel& model)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    }
    write_model(out, model);
    if (!out) {
        throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
    }
}

CrfModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    }
    return read_model(in);
}

} // namespace tmcrf
