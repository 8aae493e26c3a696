/*
Copyright 2026 bekktail developers
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "bekktail/model.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace bekk {

namespace {

using nlohmann::json;

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

bool all_finite(const Matrix& m) { return m.allFinite(); }

Matrix matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) fail(ErrorCode::ParseError, what + ": expected a nested array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array()) fail(ErrorCode::ParseError, what + ": expected rows to be arrays");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array()) fail(ErrorCode::ParseError, what + ": expected rows to be arrays");
        if (static_cast<Eigen::Index>(row.size()) != cols)
            fail(ErrorCode::ShapeMismatch, what + ": ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& v = row[static_cast<std::size_t>(c)];
            if (!v.is_number()) fail(ErrorCode::ParseError, what + ": non-numeric entry");
            m(r, c) = v.get<double>();
        }
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

int positive_int(const json& obj, const char* key) {
    if (!obj.contains(key)) fail(ErrorCode::ParseError, std::string("missing key '") + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        fail(ErrorCode::ParseError, std::string("'") + key + "' must be a positive integer");
    return static_cast<int>(v.get<long long>());
}

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
}

void hash_matrix(std::uint64_t& h, const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            double v = m(r, c);
            if (v == 0.0) v = 0.0;  // fold -0 into +0
            std::uint64_t bits;
            std::memcpy(&bits, &v, sizeof bits);
            hash_bytes(h, &bits, sizeof bits);
        }
}

}  // namespace

std::vector<Matrix> ModelSpec::lag_coefficients(int lag) const {
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(l));
    for (int j = 1; j <= l; ++j) out.push_back(coef(lag, j));
    return out;
}

ModelSpec validate_spec(ModelSpec raw) {
    if (raw.d < 1 || raw.q < 1 || raw.l < 1)
        fail(ErrorCode::ShapeMismatch, "d, q and l must all be positive");
    if (raw.C.rows() != raw.d || raw.C.cols() != raw.d)
        fail(ErrorCode::ShapeMismatch, "C must be d x d");
    if (raw.A.size() != static_cast<std::size_t>(raw.q * raw.l))
        fail(ErrorCode::ShapeMismatch, "expected exactly q*l coefficient matrices, got " +
                                           std::to_string(raw.A.size()));
    bool any_nonzero = false;
    for (std::size_t k = 0; k < raw.A.size(); ++k) {
        const Matrix& a = raw.A[k];
        if (a.rows() != raw.d || a.cols() != raw.d)
            fail(ErrorCode::ShapeMismatch, "coefficient matrix " + std::to_string(k) + " is not d x d");
        if (!all_finite(a)) fail(ErrorCode::InvalidArgument, "non-finite coefficient entry");
        if (a.cwiseAbs().maxCoeff() > 0.0) any_nonzero = true;
    }
    if (!all_finite(raw.C)) fail(ErrorCode::InvalidArgument, "non-finite entry in C");
    if (!any_nonzero) fail(ErrorCode::AllZeroCoefficients, "all coefficient matrices are zero");

    raw.C = (0.5 * (raw.C + raw.C.transpose())).eval();
    Eigen::LLT<Matrix> llt(raw.C);
    if (llt.info() != Eigen::Success)
        fail(ErrorCode::NotPositiveDefinite, "C is not positive definite (Cholesky failed)");
    const Matrix& lower = llt.matrixLLT();
    for (Eigen::Index i = 0; i < raw.d; ++i)
        if (!(lower(i, i) > 0.0))
            fail(ErrorCode::NotPositiveDefinite, "C is not positive definite (Cholesky failed)");
    return raw;
}

Matrix CompanionTemplate::placement(std::size_t slot) const {
    Matrix out = Matrix::Zero(dim, dim);
    const RandomSlot& s = random_slots.at(slot);
    out.block(s.row_offset, s.col_offset, d, d) = slot_matrices.at(slot);
    return out;
}

Matrix CompanionTemplate::assemble(const std::vector<double>& normals) const {
    if (normals.size() != random_slots.size())
        throw Error(ErrorCode::DimensionMismatch, "expected one normal per random slot");
    Matrix m = deterministic_part;
    for (std::size_t s = 0; s < random_slots.size(); ++s)
        m.block(random_slots[s].row_offset, random_slots[s].col_offset, d, d) += normals[s] * slot_matrices[s];
    return m;
}

CompanionTemplate build_companion_template(const ModelSpec& spec) {
    CompanionTemplate t;
    t.d = spec.d;
    t.dim = spec.d * spec.q;
    t.deterministic_part = Matrix::Zero(t.dim, t.dim);
    for (int i = 1; i < spec.q; ++i)
        t.deterministic_part.block(i * spec.d, (i - 1) * spec.d, spec.d, spec.d).setIdentity();
    for (int lag = 1; lag <= spec.q; ++lag)
        for (int j = 1; j <= spec.l; ++j) {
            t.random_slots.push_back(RandomSlot{lag, j, 0, (lag - 1) * spec.d});
            t.slot_matrices.push_back(spec.coef(lag, j));
        }
    t.noise_cov = Matrix::Zero(t.dim, t.dim);
    t.noise_cov.topLeftCorner(spec.d, spec.d) = spec.C;
    t.noise_chol = Eigen::LLT<Matrix>(spec.C).matrixL();
    return t;
}

Matrix one_step_covariance(const ModelSpec& spec, const Vector& state) {
    if (state.size() != spec.companion_dim())
        throw Error(ErrorCode::DimensionMismatch, "state must have length d*q = " +
                                                      std::to_string(spec.companion_dim()));
    Matrix h = spec.C;
    for (int lag = 1; lag <= spec.q; ++lag) {
        const Vector x = state.segment((lag - 1) * spec.d, spec.d);
        for (int j = 1; j <= spec.l; ++j) {
            const Vector ax = spec.coef(lag, j) * x;
            h.noalias() += ax * ax.transpose();
        }
    }
    return h;
}

ModelSpec parse_model_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        fail(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) fail(ErrorCode::ParseError, "model config must be a JSON object");
    static const std::set<std::string> allowed = {"d", "q", "l", "C", "A"};
    for (const auto& item : root.items())
        if (!allowed.count(item.key())) fail(ErrorCode::ParseError, "unknown key '" + item.key() + "'");

    ModelSpec spec;
    spec.d = positive_int(root, "d");
    spec.q = positive_int(root, "q");
    spec.l = positive_int(root, "l");
    if (!root.contains("C")) fail(ErrorCode::ParseError, "missing key 'C'");
    spec.C = matrix_from_json(root.at("C"), "C");
    if (!root.contains("A") || !root.at("A").is_array()) fail(ErrorCode::ParseError, "'A' must be an array");

    const json& entries = root.at("A");
    if (entries.size() != static_cast<std::size_t>(spec.q * spec.l))
        fail(ErrorCode::ShapeMismatch, "'A' must hold exactly q*l entries");
    spec.A.assign(static_cast<std::size_t>(spec.q * spec.l), Matrix());
    std::vector<bool> seen(spec.A.size(), false);
    static const std::set<std::string> entry_keys = {"lag", "index", "matrix"};
    for (const json& e : entries) {
        if (!e.is_object()) fail(ErrorCode::ParseError, "'A' entries must be objects");
        for (const auto& item : e.items())
            if (!entry_keys.count(item.key()))
                fail(ErrorCode::ParseError, "unknown key '" + item.key() + "' in 'A' entry");
        const int lag = positive_int(e, "lag");
        const int index = positive_int(e, "index");
        if (lag > spec.q || index > spec.l)
            fail(ErrorCode::ShapeMismatch, "'A' entry (lag " + std::to_string(lag) + ", index " +
                                               std::to_string(index) + ") out of range");
        const auto slot = static_cast<std::size_t>((lag - 1) * spec.l + (index - 1));
        if (seen[slot]) fail(ErrorCode::ShapeMismatch, "duplicate 'A' entry");
        seen[slot] = true;
        if (!e.contains("matrix")) fail(ErrorCode::ParseError, "missing key 'matrix' in 'A' entry");
        spec.A[slot] = matrix_from_json(e.at("matrix"), "A matrix");
    }
    return validate_spec(std::move(spec));
}

ModelSpec load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ParseError, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_config(buf.str());
}

std::string model_config_json(const ModelSpec& spec) {
    json root;
    root["d"] = spec.d;
    root["q"] = spec.q;
    root["l"] = spec.l;
    root["C"] = matrix_to_json(spec.C);
    json entries = json::array();
    for (int lag = 1; lag <= spec.q; ++lag)
        for (int j = 1; j <= spec.l; ++j)
            entries.push_back({{"lag", lag}, {"index", j}, {"matrix", matrix_to_json(spec.coef(lag, j))}});
    root["A"] = std::move(entries);
    return root.dump(2);
}

std::string spec_hash(const ModelSpec& spec) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    const std::int64_t dims[3] = {spec.d, spec.q, spec.l};
    hash_bytes(h, dims, sizeof dims);
    hash_matrix(h, spec.C);
    for (const Matrix& a : spec.A) hash_matrix(h, a);
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << h;
    return out.str();
}

}  // namespace bekk
