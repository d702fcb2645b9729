#include "torinv/document.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "torinv/builtins.hpp"
#include "torinv/errors.hpp"

namespace torinv {

namespace {

using nlohmann::json;

constexpr long long kSafeIntBound = 9007199254740991LL;  // 2^53 - 1

const json& require_field(const json& j, const char* name) {
    if (!j.is_object()) throw ParseError("expected a JSON object with field '" +
                                         std::string(name) + "'");
    auto it = j.find(name);
    if (it == j.end()) throw ParseError("missing field '" + std::string(name) + "'");
    return *it;
}

std::size_t size_from_json(const json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ParseError(std::string(what) + " must be a non-negative integer");
    return static_cast<std::size_t>(j.get<long long>());
}

std::string string_from_json(const json& j, const char* what) {
    if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
    return j.get<std::string>();
}

Word word_from_json(const json& j, std::size_t generator_count) {
    if (!j.is_array()) throw ParseError("a word must be an array of nonzero letters");
    Word w;
    for (const json& letter : j) {
        if (!letter.is_number_integer())
            throw ParseError("word letters must be integers");
        int v = letter.get<int>();
        if (v == 0) throw ParseError("word letters must be nonzero");
        if (static_cast<std::size_t>(v > 0 ? v : -v) > generator_count)
            throw ParseError("word letter " + std::to_string(v) +
                             " exceeds the generator count " +
                             std::to_string(generator_count));
        w.push_back(v);
    }
    return w;
}

json word_to_json(const Word& w) {
    json out = json::array();
    for (int v : w) out.push_back(v);
    return out;
}

json presentation_to_json(const GroupPresentation& pres) {
    json relators = json::array();
    for (const Word& w : pres.relators) relators.push_back(word_to_json(w));
    return json{{"generators", pres.generator_names}, {"relators", relators}};
}

GroupPresentation presentation_from_json(const json& j) {
    GroupPresentation pres;
    const json& gens = require_field(j, "generators");
    if (!gens.is_array()) throw ParseError("'generators' must be an array of names");
    for (const json& g : gens)
        pres.generator_names.push_back(string_from_json(g, "generator name"));
    const json& rels = require_field(j, "relators");
    if (!rels.is_array()) throw ParseError("'relators' must be an array of words");
    for (const json& r : rels)
        pres.relators.push_back(word_from_json(r, pres.generator_names.size()));
    return pres;
}

json representation_to_json(const Representation& rep) {
    json images = json::array();
    for (const GLnZ& g : rep.images) images.push_back(int_matrix_to_json(g.matrix()));
    return json{{"presentation", presentation_to_json(rep.presentation)},
                {"images", images},
                {"dimension", rep.n()}};
}

Representation representation_from_json(const json& j) {
    GroupPresentation pres = presentation_from_json(require_field(j, "presentation"));
    const json& imgs = require_field(j, "images");
    if (!imgs.is_array()) throw ParseError("'images' must be an array of matrices");
    std::vector<IntMatrix> images;
    for (const json& m : imgs) images.push_back(int_matrix_from_json(m));
    std::size_t dim = 0;
    if (j.contains("dimension")) dim = size_from_json(j["dimension"], "'dimension'");
    if (!images.empty() && j.contains("dimension") && dim != images[0].rows())
        throw ParseError("'dimension' disagrees with the image matrices");
    try {
        return validate_representation(pres, images, dim);
    } catch (const DomainError& e) {
        throw ParseError("invalid representation: " + std::string(e.what()));
    }
}

json nerve_to_json(const CoverNerve& nv) {
    json edges = json::array();
    for (const auto& e : nv.edges) edges.push_back(json::array({e[0], e[1]}));
    json triangles = json::array();
    for (const auto& t : nv.triangles) triangles.push_back(json::array({t[0], t[1], t[2]}));
    json tetrahedra = json::array();
    for (const auto& t : nv.tetrahedra)
        tetrahedra.push_back(json::array({t[0], t[1], t[2], t[3]}));
    json loops = json::object();
    for (const auto& [edge, name] : nv.loop_generators)
        loops[std::to_string(edge)] = name;
    return json{{"vertices", nv.vertex_count},
                {"edges", edges},
                {"triangles", triangles},
                {"tetrahedra", tetrahedra},
                {"spanning_tree", nv.spanning_tree},
                {"loop_generators", loops},
                {"presentation", presentation_to_json(nv.presentation)}};
}

CoverNerve nerve_from_json(const json& j) {
    CoverNerve nv;
    nv.vertex_count = size_from_json(require_field(j, "vertices"), "'vertices'");
    const json& edges = require_field(j, "edges");
    if (!edges.is_array()) throw ParseError("'edges' must be an array of pairs");
    for (const json& e : edges) {
        if (!e.is_array() || e.size() != 2)
            throw ParseError("each edge must be a pair of chart indices");
        nv.edges.push_back({size_from_json(e[0], "edge endpoint"),
                            size_from_json(e[1], "edge endpoint")});
    }
    const json& tris = require_field(j, "triangles");
    if (!tris.is_array()) throw ParseError("'triangles' must be an array of triples");
    for (const json& t : tris) {
        if (!t.is_array() || t.size() != 3)
            throw ParseError("each triangle must be a triple of chart indices");
        nv.triangles.push_back({size_from_json(t[0], "triangle vertex"),
                                size_from_json(t[1], "triangle vertex"),
                                size_from_json(t[2], "triangle vertex")});
    }
    if (j.contains("tetrahedra")) {
        const json& tets = j["tetrahedra"];
        if (!tets.is_array())
            throw ParseError("'tetrahedra' must be an array of quadruples");
        for (const json& t : tets) {
            if (!t.is_array() || t.size() != 4)
                throw ParseError("each tetrahedron must be a quadruple of chart indices");
            nv.tetrahedra.push_back({size_from_json(t[0], "tetrahedron vertex"),
                                     size_from_json(t[1], "tetrahedron vertex"),
                                     size_from_json(t[2], "tetrahedron vertex"),
                                     size_from_json(t[3], "tetrahedron vertex")});
        }
    }
    const json& tree = require_field(j, "spanning_tree");
    if (!tree.is_array()) throw ParseError("'spanning_tree' must be an array of edge indices");
    for (const json& e : tree)
        nv.spanning_tree.push_back(size_from_json(e, "spanning-tree entry"));
    if (j.contains("loop_generators")) {
        const json& loops = j["loop_generators"];
        if (!loops.is_object())
            throw ParseError("'loop_generators' must map edge indices to generator names");
        for (auto it = loops.begin(); it != loops.end(); ++it) {
            std::size_t edge = 0;
            try {
                std::size_t pos = 0;
                edge = std::stoull(it.key(), &pos);
                if (pos != it.key().size()) throw std::invalid_argument(it.key());
            } catch (const std::exception&) {
                throw ParseError("loop-generator key '" + it.key() +
                                 "' is not an edge index");
            }
            nv.loop_generators[edge] = string_from_json(it.value(), "generator name");
        }
    }
    if (j.contains("presentation"))
        nv.presentation = presentation_from_json(j["presentation"]);
    try {
        validate_nerve(nv);
    } catch (const DomainError& e) {
        throw ParseError("invalid nerve: " + std::string(e.what()));
    }
    return nv;
}

json transition_to_json(const TransitionData& td) {
    json labels = json::array();
    for (const AffToral& lab : td.labels) {
        json translation = json::array();
        for (const Rat& x : lab.translation) translation.push_back(rat_to_json(x));
        labels.push_back(json{{"linear", int_matrix_to_json(lab.linear.matrix())},
                              {"translation", translation}});
    }
    return json{{"nerve", nerve_to_json(td.nerve)}, {"labels", labels}};
}

TransitionData transition_from_json(const json& j) {
    TransitionData td;
    td.nerve = nerve_from_json(require_field(j, "nerve"));
    const json& labels = require_field(j, "labels");
    if (!labels.is_array()) throw ParseError("'labels' must be an array");
    for (const json& lab : labels) {
        IntMatrix linear = int_matrix_from_json(require_field(lab, "linear"));
        const json& tr = require_field(lab, "translation");
        if (!tr.is_array()) throw ParseError("'translation' must be an array of rationals");
        RatVec translation;
        for (const json& x : tr) translation.push_back(rat_from_json(x));
        if (translation.size() != linear.rows())
            throw ParseError("translation length does not match the linear part");
        try {
            td.labels.push_back(make_aff_toral(GLnZ(linear), std::move(translation)));
        } catch (const DomainError& e) {
            throw ParseError("invalid transition label: " + std::string(e.what()));
        }
    }
    if (td.labels.size() != td.nerve.edges.size())
        throw ParseError("expected one label per edge (" +
                         std::to_string(td.nerve.edges.size()) + "), got " +
                         std::to_string(td.labels.size()));
    return td;
}

json cocycle_to_json(const ChernCocycle& c) {
    json values = json::array();
    for (const IntVec& v : c.values) values.push_back(int_vec_to_json(v));
    return json{{"nerve", nerve_to_json(c.nerve)},
                {"values", values},
                {"twisting", representation_to_json(c.twisting)}};
}

ChernCocycle cocycle_from_json(const json& j) {
    ChernCocycle c;
    c.nerve = nerve_from_json(require_field(j, "nerve"));
    c.twisting = representation_from_json(require_field(j, "twisting"));
    const json& values = require_field(j, "values");
    if (!values.is_array()) throw ParseError("'values' must be an array of integer vectors");
    for (const json& v : values) c.values.push_back(int_vec_from_json(v));
    if (c.values.size() != c.nerve.triangles.size())
        throw ParseError("expected one value per triangle (" +
                         std::to_string(c.nerve.triangles.size()) + "), got " +
                         std::to_string(c.values.size()));
    for (const IntVec& v : c.values)
        if (v.size() != c.twisting.n())
            throw ParseError("cocycle values must have length " +
                             std::to_string(c.twisting.n()));
    return c;
}

json ring_element_to_json(const GroupRingElement& elem) {
    json terms = json::array();
    for (const auto& term : elem.terms)
        terms.push_back(json{{"coeff", int_to_json(term.coeff)},
                             {"word", word_to_json(term.word)}});
    return terms;
}

GroupRingElement ring_element_from_json(const json& j, std::size_t generator_count) {
    if (!j.is_array()) throw ParseError("a group-ring element must be an array of terms");
    GroupRingElement elem;
    for (const json& t : j)
        elem.terms.push_back({int_from_json(require_field(t, "coeff")),
                              word_from_json(require_field(t, "word"), generator_count)});
    return elem;
}

json complex_to_json(const TwistedComplexDocument& doc) {
    json boundaries = json::array();
    for (const auto& matrix : doc.complex.boundaries) {
        json rows = json::array();
        for (const auto& row : matrix) {
            json cols = json::array();
            for (const GroupRingElement& elem : row) cols.push_back(ring_element_to_json(elem));
            rows.push_back(cols);
        }
        boundaries.push_back(rows);
    }
    json images = json::array();
    for (const GLnZ& g : doc.twisting.images) images.push_back(int_matrix_to_json(g.matrix()));
    return json{{"presentation", presentation_to_json(doc.complex.presentation)},
                {"ranks", doc.complex.ranks},
                {"boundaries", boundaries},
                {"images", images},
                {"dimension", doc.twisting.n()}};
}

TwistedComplexDocument complex_from_json(const json& j) {
    TwistedComplexDocument doc;
    doc.complex.presentation = presentation_from_json(require_field(j, "presentation"));
    const json& ranks = require_field(j, "ranks");
    if (!ranks.is_array()) throw ParseError("'ranks' must be an array");
    for (const json& r : ranks)
        doc.complex.ranks.push_back(size_from_json(r, "rank"));
    const json& boundaries = require_field(j, "boundaries");
    if (!boundaries.is_array()) throw ParseError("'boundaries' must be an array");
    std::size_t expected =
        doc.complex.ranks.empty() ? 0 : doc.complex.ranks.size() - 1;
    if (boundaries.size() != expected)
        throw ParseError("expected " + std::to_string(expected) +
                         " boundary matrices, got " + std::to_string(boundaries.size()));
    std::size_t generator_count = doc.complex.presentation.generator_names.size();
    for (std::size_t k = 0; k < boundaries.size(); ++k) {
        const json& rows = boundaries[k];
        if (!rows.is_array() || rows.size() != doc.complex.ranks[k])
            throw ParseError("boundary " + std::to_string(k + 1) + " must have " +
                             std::to_string(doc.complex.ranks[k]) + " rows");
        std::vector<std::vector<GroupRingElement>> matrix;
        for (const json& row : rows) {
            if (!row.is_array() || row.size() != doc.complex.ranks[k + 1])
                throw ParseError("boundary " + std::to_string(k + 1) + " rows must have " +
                                 std::to_string(doc.complex.ranks[k + 1]) + " entries");
            std::vector<GroupRingElement> out_row;
            for (const json& elem : row)
                out_row.push_back(ring_element_from_json(elem, generator_count));
            matrix.push_back(std::move(out_row));
        }
        doc.complex.boundaries.push_back(std::move(matrix));
    }
    const json& imgs = require_field(j, "images");
    if (!imgs.is_array()) throw ParseError("'images' must be an array of matrices");
    std::vector<IntMatrix> images;
    for (const json& m : imgs) images.push_back(int_matrix_from_json(m));
    std::size_t dim = 0;
    if (j.contains("dimension")) dim = size_from_json(j["dimension"], "'dimension'");
    if (!images.empty() && j.contains("dimension") && dim != images[0].rows())
        throw ParseError("'dimension' disagrees with the image matrices");
    try {
        doc.twisting = validate_representation(doc.complex.presentation, images, dim);
    } catch (const DomainError& e) {
        throw ParseError("invalid twisting representation: " + std::string(e.what()));
    }
    return doc;
}

}  // namespace

std::string document_kind(const Document& doc) {
    struct Visitor {
        std::string operator()(const IntMatrix&) const { return "matrix"; }
        std::string operator()(const TwistedComplexDocument&) const { return "complex"; }
        std::string operator()(const Representation&) const { return "representation"; }
        std::string operator()(const CoverNerve&) const { return "nerve"; }
        std::string operator()(const TransitionData&) const { return "transition-data"; }
        std::string operator()(const ChernCocycle&) const { return "cocycle"; }
    };
    return std::visit(Visitor{}, doc.payload);
}

nlohmann::json document_to_json(const Document& doc) {
    struct Visitor {
        json operator()(const IntMatrix& m) const {
            return json{{"entries", int_matrix_to_json(m)}};
        }
        json operator()(const TwistedComplexDocument& c) const { return complex_to_json(c); }
        json operator()(const Representation& r) const { return representation_to_json(r); }
        json operator()(const CoverNerve& n) const { return nerve_to_json(n); }
        json operator()(const TransitionData& t) const { return transition_to_json(t); }
        json operator()(const ChernCocycle& c) const { return cocycle_to_json(c); }
    };
    json out = std::visit(Visitor{}, doc.payload);
    out["schema"] = kSchemaVersion;
    out["kind"] = document_kind(doc);
    return out;
}

Document document_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("a document must be a JSON object");
    std::string schema = string_from_json(require_field(j, "schema"), "'schema'");
    if (schema != kSchemaVersion)
        throw ParseError("unsupported schema '" + schema + "'; expected '" +
                         kSchemaVersion + "'");
    std::string kind = string_from_json(require_field(j, "kind"), "'kind'");
    if (kind == "matrix")
        return Document{int_matrix_from_json(require_field(j, "entries"))};
    if (kind == "complex") return Document{complex_from_json(j)};
    if (kind == "representation") return Document{representation_from_json(j)};
    if (kind == "nerve") return Document{nerve_from_json(j)};
    if (kind == "transition-data") return Document{transition_from_json(j)};
    if (kind == "cocycle") return Document{cocycle_from_json(j)};
    throw ParseError("unknown document kind '" + kind + "'");
}

std::string serialize_document(const Document& doc) {
    return document_to_json(doc).dump(2) + "\n";
}

Document parse_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("invalid JSON: " + std::string(e.what()));
    }
    return document_from_json(j);
}

Document load_document(const std::string& target) {
    constexpr const char* kBuiltinPrefix = "builtin:";
    if (target.rfind(kBuiltinPrefix, 0) == 0) {
        std::string name = target.substr(std::string(kBuiltinPrefix).size());
        if (name == "rp2-twisted")
            return Document{TwistedComplexDocument{rp2_cellular_complex(), rp2_twisted_rep()}};
        if (name == "rp2-bundle") return Document{rp2_bundle()};
        if (name == "s2-tetra") return Document{s2_tetra_bundle()};
        if (name == "circle-loop") return Document{circle_loop_bundle()};
        throw ParseError("unknown builtin '" + name +
                         "'; available: rp2-twisted, rp2-bundle, s2-tetra, circle-loop");
    }
    std::ifstream in(target, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + target + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_document(buffer.str());
}

nlohmann::json int_to_json(const Int& v) {
    if (v <= kSafeIntBound && v >= -kSafeIntBound) return json(v.convert_to<long long>());
    return json(v.str());
}

Int int_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::exception&) {
            throw ParseError("'" + j.get<std::string>() + "' is not an integer");
        }
    }
    throw ParseError("expected an integer (number or decimal string)");
}

nlohmann::json rat_to_json(const Rat& v) {
    const Int num = numerator(v), den = denominator(v);
    if (den == 1) return int_to_json(num);
    return json(num.str() + "/" + den.str());
}

Rat rat_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        std::size_t slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rat(Int(s));
            Int den(s.substr(slash + 1));
            if (den == 0) throw ParseError("rational '" + s + "' has denominator 0");
            return Rat(Int(s.substr(0, slash)), den);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("'" + s + "' is not a rational (expected \"p/q\")");
        }
    }
    throw ParseError("expected a rational (integer or \"p/q\" string)");
}

nlohmann::json int_vec_to_json(const IntVec& v) {
    json out = nlohmann::json::array();
    for (const Int& x : v) out.push_back(int_to_json(x));
    return out;
}

IntVec int_vec_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ParseError("expected an array of integers");
    IntVec out;
    for (const auto& x : j) out.push_back(int_from_json(x));
    return out;
}

nlohmann::json int_matrix_to_json(const IntMatrix& m) {
    json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = nlohmann::json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(int_to_json(m.at(i, k)));
        rows.push_back(row);
    }
    return rows;
}

IntMatrix int_matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty())
        throw ParseError("expected a non-empty array of matrix rows");
    std::size_t cols = 0;
    if (!j[0].is_array()) throw ParseError("matrix rows must be arrays");
    cols = j[0].size();
    IntMatrix m(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ParseError("matrix rows must all have the same length");
        for (std::size_t k = 0; k < cols; ++k) m.at(i, k) = int_from_json(j[i][k]);
    }
    return m;
}

}  // namespace torinv
