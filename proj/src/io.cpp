#include "qhforge/io.hpp"

#include "qhforge/errors.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace qhforge::io {

namespace fs = std::filesystem;

json rat_to_json(const Rat& r) {
    return json{{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}};
}

Rat rat_from_json(const json& j) {
    Rat r(Int(j.at("num").get<std::string>(), 10), Int(j.at("den").get<std::string>(), 10));
    r.canonicalize();
    return r;
}

namespace {

json coh_to_json(const CohClass& c) {
    json out = json::array();
    for (const auto& [i, v] : c.coeff) out.push_back(json::array({i, rat_str(v)}));
    return out;
}

CohClass coh_from_json(const json& j) {
    CohClass c;
    for (const auto& term : j) c += parse_rat(term.at(1).get<std::string>()) * CohClass::basis(term.at(0).get<int>());
    return c;
}

json class_to_json(const CurveClass& a) {
    json out = json::array();
    for (long c : a.coords) out.push_back(c);
    return out;
}

CurveClass class_from_json(const json& j) {
    std::vector<long> coords;
    for (const auto& c : j) coords.push_back(c.get<long>());
    return CurveClass(std::move(coords));
}

}  // namespace

json model_to_json(const RingModel& m) {
    const auto& d = m.data();
    json basis = json::array();
    for (const auto& b : d.basis) basis.push_back({{"label", b.label}, {"degree", b.degree}});
    json cup = json::array();
    for (const auto& row : d.cup) {
        json r = json::array();
        for (const auto& c : row) r.push_back(coh_to_json(c));
        cup.push_back(r);
    }
    json pairing = json::array();
    for (const auto& row : d.pairing) {
        json r = json::array();
        for (const auto& v : row) r.push_back(rat_str(v));
        pairing.push_back(r);
    }
    json weights = json::array();
    for (const auto& w : d.energy_weights) weights.push_back(rat_str(w));
    json chern = json::array();
    for (long c : d.chern_weights) chern.push_back(c);
    json divisor_pairing = json::object();
    for (int i : d.divisor_indices) {
        json row = json::array();
        for (const auto& v : d.divisor_pairing[i]) row.push_back(rat_str(v));
        divisor_pairing[std::to_string(i)] = row;
    }
    return json{{"schema", "qhforge.model/1"},
                {"name", d.name},
                {"complex_dim", d.complex_dim},
                {"basis", basis},
                {"cup", cup},
                {"pairing", pairing},
                {"unit", d.unit_index},
                {"point", d.point_index},
                {"divisors", d.divisor_indices},
                {"lattice", json{{"weights", weights}, {"chern", chern}}},
                {"divisor_pairing", divisor_pairing}};
}

RingModel model_from_json(const json& j) {
    if (j.at("schema").get<std::string>() != "qhforge.model/1")
        throw Error("unsupported model schema");
    RingModel::Data d;
    d.name = j.at("name").get<std::string>();
    d.complex_dim = j.at("complex_dim").get<int>();
    for (const auto& b : j.at("basis"))
        d.basis.push_back({b.at("label").get<std::string>(), b.at("degree").get<int>()});
    for (const auto& row : j.at("cup")) {
        std::vector<CohClass> r;
        for (const auto& c : row) r.push_back(coh_from_json(c));
        d.cup.push_back(std::move(r));
    }
    for (const auto& row : j.at("pairing")) {
        std::vector<Rat> r;
        for (const auto& v : row) r.push_back(parse_rat(v.get<std::string>()));
        d.pairing.push_back(std::move(r));
    }
    d.unit_index = j.at("unit").get<int>();
    d.point_index = j.at("point").get<int>();
    for (const auto& i : j.at("divisors")) d.divisor_indices.push_back(i.get<int>());
    for (const auto& w : j.at("lattice").at("weights"))
        d.energy_weights.push_back(parse_rat(w.get<std::string>()));
    for (const auto& c : j.at("lattice").at("chern")) d.chern_weights.push_back(c.get<long>());
    d.divisor_pairing.assign(d.basis.size(), {});
    for (const auto& [key, row] : j.at("divisor_pairing").items()) {
        std::vector<Rat> r;
        for (const auto& v : row) r.push_back(parse_rat(v.get<std::string>()));
        d.divisor_pairing[std::stoi(key)] = std::move(r);
    }
    return RingModel(std::move(d));
}

RingModel load_model(const std::string& name_or_path) {
    if (auto m = RingModel::builtin(name_or_path)) return *m;
    if (!fs::exists(name_or_path))
        throw Error("unknown model '" + name_or_path + "' (not a builtin, not a file)");
    return model_from_json(json::parse(read_file(name_or_path)));
}

std::string table_to_jsonl(const CorrelatorTable& table) {
    std::ostringstream os;
    json header{{"schema", "qhforge.table/1"},
                {"model", table.model_name()},
                {"cutoff", rat_str(table.cutoff())},
                {"solver_version", table.solver_version()}};
    os << header.dump() << "\n";
    for (const auto& [key, entry] : table.entries()) {
        json ins = json::array();
        for (const auto& i : key.insertions()) ins.push_back(json::array({i.psi, i.cls}));
        json line{{"A", class_to_json(key.cls())},
                  {"ins", ins},
                  {"value", rat_to_json(entry.value)},
                  {"prov", provenance_str(entry.prov)}};
        os << line.dump() << "\n";
    }
    return os.str();
}

CorrelatorTable table_from_jsonl(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw Error("empty table file");
    json header = json::parse(line);
    if (header.at("schema").get<std::string>() != "qhforge.table/1")
        throw Error("unsupported table schema");
    CorrelatorTable table(header.at("model").get<std::string>(),
                          parse_rat(header.at("cutoff").get<std::string>()),
                          header.at("solver_version").get<int>());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        std::vector<Insertion> ins;
        for (const auto& i : j.at("ins"))
            ins.push_back({i.at(0).get<int>(), i.at(1).get<int>()});
        table.set(CorrelatorKey(class_from_json(j.at("A")), std::move(ins)),
                  rat_from_json(j.at("value")),
                  parse_provenance(j.at("prov").get<std::string>()));
    }
    return table;
}

namespace {

std::string sanitize(const Rat& r) {
    std::string s = rat_str(r);
    for (auto& c : s)
        if (c == '/') c = '_';
    return s;
}

}  // namespace

std::string table_cache_filename(const std::string& model, const Rat& cutoff, int version) {
    return model + "_c" + sanitize(cutoff) + "_v" + std::to_string(version) + ".jsonl";
}

std::string save_table_cache(const std::string& dir, const CorrelatorTable& table) {
    fs::create_directories(dir);
    fs::path path = fs::path(dir) / table_cache_filename(table.model_name(), table.cutoff(),
                                                         table.solver_version());
    write_file(path.string(), table_to_jsonl(table));
    return path.string();
}

std::optional<CorrelatorTable> load_table_cache(const std::string& dir, const std::string& model,
                                                const Rat& cutoff, int version) {
    fs::path path = fs::path(dir) / table_cache_filename(model, cutoff, version);
    if (!fs::exists(path)) return std::nullopt;
    try {
        CorrelatorTable table = table_from_jsonl(read_file(path.string()));
        if (table.model_name() != model || table.cutoff() != cutoff ||
            table.solver_version() != version)
            return std::nullopt;
        return table;
    } catch (const std::exception&) {
        return std::nullopt;  // unreadable cache: recompute
    }
}

json floer_to_json(const FloerComplex& c) {
    json weights = json::array();
    for (const auto& w : c.lattice()->energy_weights()) weights.push_back(rat_str(w));
    json chern = json::array();
    for (long ch : c.lattice()->chern_weights()) chern.push_back(ch);
    json gens = json::array();
    for (const auto& g : c.generators())
        gens.push_back({{"id", g.id}, {"cz", g.cz}, {"action", rat_str(g.action)}});
    json boundary = json::array();
    for (const auto& [arrow, element] : c.boundary()) {
        json terms = json::array();
        for (const auto& [cls, coeff] : element.terms()) {
            json t{{"coords", class_to_json(cls)},
                   {"num", coeff.get_num().get_str()},
                   {"den", coeff.get_den().get_str()}};
            terms.push_back(t);
        }
        boundary.push_back({{"from", c.generators()[arrow.first].id},
                            {"to", c.generators()[arrow.second].id},
                            {"terms", terms}});
    }
    return json{{"schema", "qhforge.floer/1"}, {"weights", weights},   {"chern", chern},
                {"cutoff", rat_str(c.cutoff())}, {"generators", gens}, {"boundary", boundary}};
}

FloerComplex floer_from_json(const json& j) {
    if (j.at("schema").get<std::string>() != "qhforge.floer/1")
        throw Error("unsupported floer schema");
    std::vector<Rat> weights;
    for (const auto& w : j.at("weights")) weights.push_back(parse_rat(w.get<std::string>()));
    std::vector<long> chern;
    for (const auto& c : j.at("chern")) chern.push_back(c.get<long>());
    LatticePtr lattice = make_lattice(std::move(weights), std::move(chern));
    Rat cutoff = parse_rat(j.at("cutoff").get<std::string>());
    std::vector<FloerGenerator> gens;
    std::map<std::string, int> index;
    for (const auto& g : j.at("generators")) {
        index[g.at("id").get<std::string>()] = static_cast<int>(gens.size());
        gens.push_back({g.at("id").get<std::string>(), g.at("cz").get<long>(),
                        parse_rat(g.at("action").get<std::string>())});
    }
    std::map<std::pair<int, int>, NovikovElement> boundary;
    for (const auto& b : j.at("boundary")) {
        auto from = index.find(b.at("from").get<std::string>());
        auto to = index.find(b.at("to").get<std::string>());
        if (from == index.end() || to == index.end())
            throw Error("boundary references an unknown generator");
        NovikovElement e(lattice, cutoff);
        for (const auto& t : b.at("terms")) {
            Rat coeff(Int(t.at("num").get<std::string>(), 10),
                      Int(t.at("den").get<std::string>(), 10));
            coeff.canonicalize();
            e += NovikovElement::monomial(lattice, class_from_json(t.at("coords")), coeff, cutoff);
        }
        auto key = std::make_pair(from->second, to->second);
        auto it = boundary.find(key);
        if (it == boundary.end()) boundary.emplace(key, e);
        else it->second += e;
    }
    return FloerComplex(lattice, cutoff, std::move(gens), std::move(boundary));
}

FloerComplex load_floer(const std::string& path) {
    if (!fs::exists(path)) throw Error("unreadable complex file '" + path + "'");
    return floer_from_json(json::parse(read_file(path)));
}

json graphs_to_json(const std::vector<DualGraph>& graphs) {
    json list = json::array();
    for (const auto& g : graphs) {
        json vertices = json::array();
        for (const auto& v : g.vertices)
            vertices.push_back({{"genus", v.genus},
                                {"class", class_to_json(v.cls)},
                                {"marks", v.marks},
                                {"ghost", v.ghost}});
        json edges = json::array();
        for (const auto& [a, b] : g.edges) edges.push_back(json::array({a, b}));
        list.push_back({{"vertices", vertices}, {"edges", edges}});
    }
    return json{{"schema", "qhforge.strata/1"},
                {"count", graphs.size()},
                {"graphs", list}};
}

json series_to_json(const GenSeries& series) {
    json monomials = json::array();
    for (const auto& [monomial, value] : series.coeff) {
        json ins = json::array();
        for (const auto& i : monomial.ins) ins.push_back(json::array({i.psi, i.cls}));
        monomials.push_back(
            {{"ins", ins}, {"A", class_to_json(monomial.cls)}, {"value", rat_to_json(value)}});
    }
    return json{{"schema", "qhforge.series/1"}, {"monomials", monomials}};
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot read '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + path + "'");
    f << content;
}

}  // namespace qhforge::io
