#include "mingain/document.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mingain {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw Error(ErrorCode::ParseError, path + ": " + what);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed)
{
    if (!obj.is_object())
        fail(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed)
            ok = ok || key == a;
        if (!ok)
            fail(path, "unknown field '" + key + "'");
    }
}

const json& field(const json& obj, const std::string& path, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end())
        fail(path, std::string("missing field '") + key + "'");
    return *it;
}

std::string as_string(const json& v, const std::string& path)
{
    if (!v.is_string())
        fail(path, "expected a string");
    return v.get<std::string>();
}

double as_number(const json& v, const std::string& path)
{
    if (!v.is_number())
        fail(path, "expected a number");
    return v.get<double>();
}

const json& as_array(const json& v, const std::string& path)
{
    if (!v.is_array())
        fail(path, "expected an array");
    return v;
}

std::vector<std::string> string_list(const json& v, const std::string& path)
{
    std::vector<std::string> out;
    const auto& arr = as_array(v, path);
    for (std::size_t k = 0; k < arr.size(); ++k)
        out.push_back(as_string(arr[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

// Rethrows library validation errors with the document path in front.
template <class F>
auto at_path(const std::string& path, F&& f)
{
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError)
            throw;
        std::string what = e.what();
        auto colon = what.find(": ");
        throw Error(e.code(), path + ": " + (colon == std::string::npos ? what : what.substr(colon + 2)));
    }
}

std::size_t abstract_index(const BPA& bpa, const std::string& name, const std::string& path)
{
    if (name.size() > 1 && name[0] == 's') {
        std::size_t k = 0;
        bool digits = true;
        for (std::size_t c = 1; c < name.size(); ++c) {
            if (name[c] < '0' || name[c] > '9') {
                digits = false;
                break;
            }
            k = k * 10 + static_cast<std::size_t>(name[c] - '0');
        }
        if (digits && name[1] != '0' && k >= 1 && k <= bpa.focal_count())
            return k - 1;
    }
    throw Error(ErrorCode::UnknownLabel, path + ": '" + name + "' is not an abstract element (expected s1..s"
                                             + std::to_string(bpa.focal_count()) + ")");
}

void require_pair(const EvidenceDocument& doc, const char* what)
{
    if (doc.evidence.size() != 2)
        throw Error(ErrorCode::InconsistentConditional,
                    std::string(what) + " need exactly two evidence entries, found "
                        + std::to_string(doc.evidence.size()));
}

json set_json(const Proposition& p)
{
    return p.labels();
}

json number(double v, const OutputOptions& options)
{
    if (!std::isfinite(v))
        return nullptr;
    return round_to(v, options.precision);
}

json measure(double nats, const OutputOptions& options)
{
    return number(options.bits ? nats / std::log(2.0) : nats, options);
}

json information_json(const InformationReport& r, const OutputOptions& o)
{
    return {{"h_left", measure(r.h_left, o)},         {"h_right", measure(r.h_right, o)},
            {"h_joint", measure(r.h_joint, o)},       {"info_left", measure(r.info_left, o)},
            {"info_right", measure(r.info_right, o)}, {"info_joint", measure(r.info_joint, o)},
            {"gain", measure(r.gain, o)},             {"mutual", measure(r.mutual, o)}};
}

json solver_json(const std::optional<SolverReport>& r, const OutputOptions& o)
{
    if (!r)
        return nullptr;
    return {{"method", std::string(to_string(r->method))},
            {"iterations", r->iterations},
            {"residual", number(r->residual, o)},
            {"entropy", measure(r->entropy, o)}};
}

json step_json(const CombinedResult& step, const OutputOptions& o)
{
    json joint = json::object();
    joint["left"] = step.joint.left().labels();
    joint["right"] = step.joint.right().labels();
    json rows = json::array();
    for (std::size_t i = 0; i < step.joint.left().size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < step.joint.right().size(); ++j)
            row.push_back(number(step.joint(i, j), o));
        rows.push_back(std::move(row));
    }
    joint["cells"] = std::move(rows);

    auto abstract = [](const EvidenceBody& body) {
        json out = json::array();
        for (std::size_t s = 0; s < body.frame().size(); ++s)
            out.push_back({{"element", body.frame().label(s)}, {"set", body.relation().targets_of(s).labels()}});
        return out;
    };

    return {{"rule", std::string(to_string(step.rule))},
            {"normalization", number(step.normalization, o)},
            {"conflict_mass", number(step.conflict_mass, o)},
            {"left", abstract(step.left)},
            {"right", abstract(step.right)},
            {"joint", std::move(joint)},
            {"information", information_json(step.measures, o)},
            {"solver", solver_json(step.solver, o)}};
}

}  // namespace

EvidenceDocument parse_document(std::string_view text)
{
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    only_keys(root, "document", {"frame", "evidence", "conditionals", "joint_compatibility"});

    auto labels = string_list(field(root, "document", "frame"), "frame");
    Frame frame = at_path("frame", [&] { return Frame(labels); });

    std::vector<NamedBpa> evidence;
    const auto& ev = as_array(field(root, "document", "evidence"), "evidence");
    if (ev.empty())
        fail("evidence", "at least one evidence entry is required");
    for (std::size_t k = 0; k < ev.size(); ++k) {
        const std::string path = "evidence[" + std::to_string(k) + "]";
        only_keys(ev[k], path, {"name", "focal"});
        auto name = as_string(field(ev[k], path, "name"), path + ".name");
        std::vector<MassAssignment> assignments;
        const auto& focal = as_array(field(ev[k], path, "focal"), path + ".focal");
        for (std::size_t f = 0; f < focal.size(); ++f) {
            const std::string fpath = path + ".focal[" + std::to_string(f) + "]";
            only_keys(focal[f], fpath, {"set", "mass"});
            auto set = string_list(field(focal[f], fpath, "set"), fpath + ".set");
            double mass = as_number(field(focal[f], fpath, "mass"), fpath + ".mass");
            assignments.push_back({std::move(set), mass});
        }
        BPA bpa = at_path(path, [&] { return make_bpa(frame, assignments); });
        evidence.push_back({std::move(name), std::move(bpa)});
    }

    std::vector<ConditionalSpec> conditionals;
    if (auto it = root.find("conditionals"); it != root.end()) {
        const auto& arr = as_array(*it, "conditionals");
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string path = "conditionals[" + std::to_string(k) + "]";
            only_keys(arr[k], path, {"given", "then", "prob"});
            ConditionalSpec spec;
            spec.given = as_string(field(arr[k], path, "given"), path + ".given");
            spec.then = as_string(field(arr[k], path, "then"), path + ".then");
            spec.prob = as_number(field(arr[k], path, "prob"), path + ".prob");
            conditionals.push_back(std::move(spec));
        }
    }

    std::vector<TripleSpec> triples;
    if (auto it = root.find("joint_compatibility"); it != root.end()) {
        const auto& arr = as_array(*it, "joint_compatibility");
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string path = "joint_compatibility[" + std::to_string(k) + "]";
            only_keys(arr[k], path, {"left", "right", "target"});
            TripleSpec spec;
            spec.left = as_string(field(arr[k], path, "left"), path + ".left");
            spec.right = as_string(field(arr[k], path, "right"), path + ".right");
            spec.target = as_string(field(arr[k], path, "target"), path + ".target");
            triples.push_back(std::move(spec));
        }
    }

    EvidenceDocument doc{std::move(frame), std::move(evidence), std::move(conditionals), std::move(triples)};
    // Surface unresolvable names at parse time so validate catches them.
    resolve_conditionals(doc);
    resolve_joint_compatibility(doc);
    return doc;
}

std::vector<Conditional> resolve_conditionals(const EvidenceDocument& doc)
{
    std::vector<Conditional> out;
    if (doc.conditionals.empty())
        return out;
    require_pair(doc, "conditionals");
    for (std::size_t k = 0; k < doc.conditionals.size(); ++k) {
        const auto& c = doc.conditionals[k];
        const std::string path = "conditionals[" + std::to_string(k) + "]";
        out.push_back({abstract_index(doc.evidence[0].bpa, c.given, path + ".given"),
                       abstract_index(doc.evidence[1].bpa, c.then, path + ".then"), c.prob});
    }
    return out;
}

std::optional<JointCompatibility> resolve_joint_compatibility(const EvidenceDocument& doc)
{
    if (doc.joint_compatibility.empty())
        return std::nullopt;
    require_pair(doc, "joint compatibility triples");
    const auto left = abstract_evidence(doc.evidence[0].bpa);
    const auto right = abstract_evidence(doc.evidence[1].bpa);
    std::vector<JointCompatibility::Triple> triples;
    for (std::size_t k = 0; k < doc.joint_compatibility.size(); ++k) {
        const auto& t = doc.joint_compatibility[k];
        const std::string path = "joint_compatibility[" + std::to_string(k) + "]";
        auto target = doc.frame.index_of(t.target);
        if (!target)
            throw Error(ErrorCode::UnknownLabel, path + ".target: '" + t.target + "' is not in the frame");
        triples.push_back({abstract_index(doc.evidence[0].bpa, t.left, path + ".left"),
                           abstract_index(doc.evidence[1].bpa, t.right, path + ".right"), *target});
    }
    return JointCompatibility::from_triples(left.frame(), right.frame(), doc.frame, triples);
}

double round_to(double value, int precision)
{
    const double scale = std::pow(10.0, precision);
    double r = std::round(value * scale) / scale;
    return r == 0.0 ? 0.0 : r;
}

json result_document(const FoldResult& result, const OutputOptions& o)
{
    const auto combined = result.bpa.canonical();
    json doc = json::object();
    doc["status"] = "ok";
    doc["rule"] = std::string(to_string(result.rule));
    doc["units"] = o.bits ? "bits" : "nats";
    doc["precision"] = o.precision;

    json masses = json::array();
    for (const auto& fe : combined.focal())
        masses.push_back({{"set", set_json(fe.set)}, {"mass", number(fe.mass, o)}});
    doc["combined"] = std::move(masses);

    std::vector<Proposition> rows;
    for (const auto& fe : combined.focal())
        rows.push_back(fe.set);
    for (std::size_t a = 0; a < combined.focal_count(); ++a)
        for (std::size_t b = a + 1; b < combined.focal_count(); ++b)
            rows.push_back(combined.focal()[a].set | combined.focal()[b].set);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    if (rows.size() > o.belief_rows)
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(o.belief_rows), rows.end());
    json table = json::array();
    for (const auto& a : rows)
        table.push_back({{"set", set_json(a)}, {"bel", number(bel(combined, a), o)}, {"pl", number(pl(combined, a), o)}});
    doc["belief"] = std::move(table);

    json steps = json::array();
    for (const auto& s : result.steps)
        steps.push_back(step_json(s, o));
    doc["steps"] = std::move(steps);
    if (!result.steps.empty()) {
        const auto& last = result.steps.back();
        doc["normalization"] = number(last.normalization, o);
        doc["conflict_mass"] = number(last.conflict_mass, o);
        doc["information"] = information_json(last.measures, o);
        doc["solver"] = solver_json(last.solver, o);
    } else {
        doc["normalization"] = number(1.0, o);
        doc["conflict_mass"] = number(0.0, o);
        doc["information"] = nullptr;
        doc["solver"] = nullptr;
    }
    return doc;
}

json conflict_document(Rule rule, const Error& error, const OutputOptions& o)
{
    json conflict = {{"code", std::string(to_string(error.code()))}, {"message", error.what()}};
    if (const auto* ce = dynamic_cast<const ConflictError*>(&error)) {
        const auto& c = ce->certificate();
        conflict["rows"] = c.row_labels;
        conflict["reachable_columns"] = c.col_labels;
        conflict["row_mass"] = number(c.row_mass, o);
        conflict["reachable_mass"] = number(c.reachable_mass, o);
    }
    return {{"status", "conflict"}, {"rule", std::string(to_string(rule))}, {"conflict", std::move(conflict)}};
}

BPA bpa_from_result(const json& result, const Frame& frame)
{
    std::vector<MassAssignment> assignments;
    double total = 0.0;
    for (const auto& entry : as_array(field(result, "result", "combined"), "combined")) {
        auto set = string_list(field(entry, "combined", "set"), "combined.set");
        double mass = as_number(field(entry, "combined", "mass"), "combined.mass");
        assignments.push_back({std::move(set), mass});
        total += assignments.back().mass;
    }
    // Each printed mass may be off by half a unit in the last place.
    int precision = 6;
    if (auto it = result.find("precision"); it != result.end() && it->is_number_integer())
        precision = it->get<int>();
    const double slack = 0.5 * std::pow(10.0, -precision) * static_cast<double>(assignments.size());
    if (total > 0.0 && std::abs(total - 1.0) <= slack + kMassTolerance)
        for (auto& a : assignments)
            a.mass /= total;
    return make_bpa(frame, assignments);
}

}  // namespace mingain
