#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "iod/element.hpp"
#include "iod/matrix.hpp"
#include "iod/models.hpp"
#include "iod/projections.hpp"

namespace iod {

using Json = nlohmann::json;

/// {"rows": r, "cols": c, "data": [[re, im], ...]}, data row-major.
inline Json matrix_to_json(const CMatrix& m) {
    Json data = Json::array();
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c)
            data.push_back({m(r, c).real(), m(r, c).imag()});
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline CMatrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
        !j.contains("data"))
        throw InvalidInput("matrix JSON requires fields rows, cols, data");
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
        throw InvalidInput("matrix rows/cols must be integers");
    const Index rows = j["rows"].get<Index>();
    const Index cols = j["cols"].get<Index>();
    if (rows < 0 || cols < 0) throw InvalidInput("matrix rows/cols must be nonnegative");
    const Json& data = j["data"];
    if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols)
        throw InvalidInput("matrix data length must equal rows*cols");
    CMatrix m(rows, cols);
    Index flat = 0;
    for (const auto& entry : data) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number())
            throw InvalidInput("matrix entries must be [re, im] pairs");
        const double re = entry[0].get<double>();
        const double im = entry[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im))
            throw InvalidInput("matrix entries must be finite");
        m(flat / cols, flat % cols) = Complex(re, im);
        ++flat;
    }
    return m;
}

/// {"dim": d, "members": [<matrix>, ...]}
inline Json family_to_json(const ProjectionFamily& f) {
    Json members = Json::array();
    for (const auto& p : f.members()) members.push_back(matrix_to_json(p.matrix));
    return Json{{"dim", f.dim()}, {"members", std::move(members)}};
}

inline ProjectionFamily family_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("members"))
        throw InvalidInput("family JSON requires fields dim, members");
    const Index dim = j["dim"].get<Index>();
    std::vector<Projection> members;
    for (const auto& mj : j["members"]) {
        CMatrix m = matrix_from_json(mj);
        if (m.rows() != dim || m.cols() != dim)
            throw InvalidInput("family member dimension mismatch");
        members.push_back(Projection::from_matrix(std::move(m)));
    }
    return ProjectionFamily(dim, std::move(members));
}

/// {"source": i, "target": j, "isometry": <matrix>}
inline Json witness_to_json(const EquivalenceWitness& w) {
    return Json{{"source", w.source},
                {"target", w.target},
                {"isometry", matrix_to_json(w.isometry)}};
}

using FamilyResolver = std::function<ProjectionFamily(const std::string&)>;

/// {"family": <family or family-ref string>, "bound": K,
///  "blocks": [{"xi": i, "eta": j, "matrix": <matrix>}, ...]}
/// Blocks are emitted sorted by (xi, eta).
inline Json element_to_json(const IodElement& x) {
    Json blocks = Json::array();
    for (const auto& [key, b] : x.blocks()) {
        blocks.push_back(Json{
            {"xi", key.first}, {"eta", key.second}, {"matrix", matrix_to_json(b)}});
    }
    return Json{{"family", family_to_json(*x.family())},
                {"bound", x.bound()},
                {"blocks", std::move(blocks)}};
}

inline IodElement element_from_json(const Json& j, const FamilyResolver& resolver = {}) {
    if (!j.is_object() || !j.contains("family") || !j.contains("bound") ||
        !j.contains("blocks"))
        throw InvalidInput("element JSON requires fields family, bound, blocks");
    FamilyPtr family;
    if (j["family"].is_string()) {
        if (!resolver)
            throw InvalidInput("family reference requires a resolver");
        family = std::make_shared<const ProjectionFamily>(
            resolver(j["family"].get<std::string>()));
    } else {
        family = std::make_shared<const ProjectionFamily>(family_from_json(j["family"]));
    }
    const double bound = j["bound"].get<double>();
    if (!std::isfinite(bound) || bound < 0.0)
        throw InvalidInput("bound must be finite and nonnegative");
    IodElement::BlockMap blocks;
    for (const auto& bj : j["blocks"]) {
        if (!bj.contains("xi") || !bj.contains("eta") || !bj.contains("matrix"))
            throw InvalidInput("block JSON requires fields xi, eta, matrix");
        const Index xi = bj["xi"].get<Index>();
        const Index eta = bj["eta"].get<Index>();
        if (!blocks.emplace(IodElement::BlockKey{xi, eta}, matrix_from_json(bj["matrix"]))
                 .second)
            throw InvalidInput("duplicate block key");
    }
    IodElement element(std::move(family), std::move(blocks), bound);
    const auto violations = validate_element(element, 1e-8);
    if (!violations.empty()) throw InvalidInput("invalid element: " + violations.front());
    return element;
}

/// {"closure_residual": r, "center_dim": d, "abelian_ok": [...],
///  "decomposition_ok": b}
inline Json type_in_report_to_json(const TypeInReport& r) {
    return Json{{"closure_residual", r.closure_residual},
                {"center_dim", r.center_dim},
                {"abelian_ok", r.abelian_ok},
                {"decomposition_ok", r.decomposition_ok}};
}

}  // namespace iod
