// Copyright 2026 The qkin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qkin/json_io.h"

#include "qkin/errors.h"

namespace qkin {

namespace {

const Json &field(const Json &j, const char *key, const std::string &where) {
    if (!j.is_object()) {
        throw ParseError(where + ": expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(where + ": missing field '" + key + "'");
    }
    return *it;
}

std::vector<std::string> string_array(const Json &j, const std::string &where) {
    if (!j.is_array()) {
        throw ParseError(where + ": expected an array of strings");
    }
    std::vector<std::string> out;
    for (const auto &e : j) {
        if (!e.is_string()) {
            throw ParseError(where + ": expected an array of strings");
        }
        out.push_back(e.get<std::string>());
    }
    return out;
}

std::vector<Complex> complex_array(const Json &j, const char *re_key, const char *im_key, const std::string &where) {
    auto re = json_number_array(field(j, re_key, where), where + "." + re_key);
    auto im = json_number_array(field(j, im_key, where), where + "." + im_key);
    if (re.size() != im.size()) {
        throw ParseError(where + ": '" + re_key + "' and '" + im_key + "' differ in length");
    }
    std::vector<Complex> out(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
        out[i] = Complex(re[i], im[i]);
    }
    return out;
}

Json complex_to_json(std::span<const Complex> v, const char *re_key, const char *im_key) {
    Json re = Json::array(), im = Json::array();
    for (auto z : v) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return Json{{re_key, re}, {im_key, im}};
}

// Library errors raised while validating parsed data are reported as parse
// failures so callers see a single error type for bad input.
template <typename F>
auto rethrow_as_parse(const std::string &where, F &&f) {
    try {
        return f();
    } catch (const ParseError &) {
        throw;
    } catch (const std::exception &e) {
        throw ParseError(where + ": " + e.what());
    }
}

}  // namespace

double json_number(const Json &j, const std::string &where) {
    if (!j.is_number()) {
        throw ParseError(where + ": expected a number");
    }
    return j.get<double>();
}

std::uint64_t json_unsigned(const Json &j, const std::string &where) {
    if (j.is_number_unsigned()) {
        return j.get<std::uint64_t>();
    }
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    throw ParseError(where + ": expected a nonnegative integer");
}

std::vector<double> json_number_array(const Json &j, const std::string &where) {
    if (!j.is_array()) {
        throw ParseError(where + ": expected an array of numbers");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto &e : j) {
        out.push_back(json_number(e, where));
    }
    return out;
}

Json matrix_to_json(const ComplexMatrix &m) {
    Json out{{"rows", m.rows()}, {"cols", m.cols()}};
    Json re = Json::array(), im = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    }
    out["re"] = std::move(re);
    out["im"] = std::move(im);
    return out;
}

ComplexMatrix matrix_from_json(const Json &j) {
    const std::string where = "matrix";
    std::size_t rows = json_unsigned(field(j, "rows", where), where + ".rows");
    std::size_t cols = json_unsigned(field(j, "cols", where), where + ".cols");
    auto entries = complex_array(j, "re", "im", where);
    return rethrow_as_parse(where, [&] { return ComplexMatrix(rows, cols, std::move(entries)); });
}

Json state_to_json(const StateVector &psi) { return complex_to_json(psi.amplitudes(), "re", "im"); }

StateVector state_from_json(const Json &j) {
    auto amps = complex_array(j, "re", "im", "state");
    return rethrow_as_parse("state", [&] { return StateVector(std::move(amps)); });
}

Json pvm_to_json(const PVM &pvm) {
    Json elements = Json::array();
    for (const auto &p : pvm.elements()) {
        elements.push_back(matrix_to_json(p.matrix()));
    }
    return Json{{"label", pvm.label()}, {"outcome_labels", pvm.outcome_labels()}, {"elements", elements}};
}

PVM pvm_from_json(const Json &j) {
    const std::string where = "pvm";
    const Json &label = field(j, "label", where);
    if (!label.is_string()) {
        throw ParseError(where + ".label: expected a string");
    }
    auto labels = string_array(field(j, "outcome_labels", where), where + ".outcome_labels");
    const Json &elements = field(j, "elements", where);
    if (!elements.is_array()) {
        throw ParseError(where + ".elements: expected an array");
    }
    std::vector<Projector> projectors;
    for (const auto &e : elements) {
        auto m = matrix_from_json(e);
        projectors.push_back(rethrow_as_parse(where, [&] { return Projector(std::move(m)); }));
    }
    return rethrow_as_parse(where, [&] { return PVM(label.get<std::string>(), std::move(projectors), labels); });
}

Json table_to_json(const ProbabilityTable &table) {
    Json observables = Json::array();
    for (const auto &o : table.observables()) {
        Json row{{"label", o.label}, {"outcomes", o.outcomes}, {"probs", o.probabilities}};
        if (!o.counts.empty()) {
            row["counts"] = o.counts;
        }
        observables.push_back(std::move(row));
    }
    const auto &p = table.provenance();
    Json provenance = p.kind == Provenance::Kind::exact ? Json{{"kind", "exact"}}
                                                        : Json{{"kind", "sampled"}, {"n", p.n}, {"seed", p.seed}};
    return Json{{"observables", observables}, {"provenance", provenance}};
}

ProbabilityTable table_from_json(const Json &j) {
    const std::string where = "table";
    const Json &observables = field(j, "observables", where);
    if (!observables.is_array()) {
        throw ParseError(where + ".observables: expected an array");
    }
    std::vector<ObservableStatistics> rows;
    for (const auto &o : observables) {
        ObservableStatistics row;
        const Json &label = field(o, "label", where);
        if (!label.is_string()) {
            throw ParseError(where + ".label: expected a string");
        }
        row.label = label.get<std::string>();
        row.outcomes = string_array(field(o, "outcomes", where), where + ".outcomes");
        row.probabilities = json_number_array(field(o, "probs", where), where + ".probs");
        if (o.contains("counts")) {
            for (const auto &c : o["counts"]) {
                row.counts.push_back(json_unsigned(c, where + ".counts"));
            }
        }
        rows.push_back(std::move(row));
    }
    const Json &prov = field(j, "provenance", where);
    const Json &kind = field(prov, "kind", where + ".provenance");
    Provenance provenance;
    if (kind == "exact") {
        provenance.kind = Provenance::Kind::exact;
    } else if (kind == "sampled") {
        provenance.kind = Provenance::Kind::sampled;
        provenance.n = json_unsigned(field(prov, "n", where), where + ".provenance.n");
        provenance.seed = json_unsigned(field(prov, "seed", where), where + ".provenance.seed");
    } else {
        throw ParseError(where + ".provenance.kind: expected 'exact' or 'sampled'");
    }
    return rethrow_as_parse(where, [&] { return ProbabilityTable(std::move(rows), provenance); });
}

Json pipeline_to_json(const PipelineReport &r) {
    Json disturbed = Json::array();
    for (std::size_t m = 0; m < r.disturbed_states.size(); ++m) {
        disturbed.push_back(Json{{"observable", r.table.observables()[m].label},
                                 {"copies", r.copies_per_observable[m]},
                                 {"state", matrix_to_json(r.disturbed_states[m].matrix())}});
    }
    return Json{{"disturbance", r.disturbance},
                {"selective_disturbance", r.selective_disturbance},
                {"clone_fidelity", r.clone_fidelity},
                {"clone_distance", r.clone_distance},
                {"unmeasured_observables", r.unmeasured_observables},
                {"projection_flagged", r.projection_flagged},
                {"prepared", matrix_to_json(r.prepared.matrix())},
                {"disturbed_ensemble", disturbed},
                {"table", table_to_json(r.table)}};
}

Json no_signaling_to_json(const NoSignalingReport &r) {
    return Json{{"reference", r.reference},
                {"contexts", r.context_labels},
                {"marginals", r.marginals},
                {"max_deviation", r.max_deviation},
                {"pass", r.pass}};
}

EnvironmentSpec environment_from_json(const Json &j) {
    const std::string where = "environment";
    auto gamma = complex_array(j, "gamma_re", "gamma_im", where);
    const Json &couplings = field(j, "couplings", where);
    if (!couplings.is_array()) {
        throw ParseError(where + ".couplings: expected an array of rows");
    }
    std::vector<std::vector<double>> rows;
    for (const auto &row : couplings) {
        rows.push_back(json_number_array(row, where + ".couplings"));
    }
    return rethrow_as_parse(where, [&] { return EnvironmentSpec(std::move(gamma), std::move(rows)); });
}

Json environment_to_json(const EnvironmentSpec &env) {
    Json out = complex_to_json(env.gamma(), "gamma_re", "gamma_im");
    out["couplings"] = env.couplings();
    return out;
}

TriDecomposedState tri_state_from_json(const Json &j) {
    const std::string where = "state";
    auto env = environment_from_json(j);
    auto c = complex_array(j, "c_re", "c_im", where);
    const Json &s = field(j, "s_vectors", where);
    if (!s.is_array()) {
        throw ParseError(where + ".s_vectors: expected an array");
    }
    std::vector<StateVector> kets;
    for (const auto &e : s) {
        kets.push_back(state_from_json(e));
    }
    return rethrow_as_parse(where,
                            [&] { return TriDecomposedState(std::move(c), std::move(kets), std::move(env)); });
}

Json tri_state_to_json(const TriDecomposedState &state) {
    Json out = environment_to_json(state.env());
    Json c = complex_to_json(state.c(), "c_re", "c_im");
    out["c_re"] = c["c_re"];
    out["c_im"] = c["c_im"];
    Json kets = Json::array();
    for (const auto &s : state.s_vectors()) {
        kets.push_back(state_to_json(s));
    }
    out["s_vectors"] = std::move(kets);
    return out;
}

std::string dump_json(const Json &j) { return j.dump(2) + "\n"; }

}  // namespace qkin
