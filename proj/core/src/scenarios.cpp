#include "fiipnn/scenarios.hpp"

#include "fiipnn/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <initializer_list>
#include <istream>
#include <iterator>
#include <limits>
#include <sstream>

namespace fiipnn {

namespace {

using json = nlohmann::json;
using Rows = std::initializer_list<std::initializer_list<double>>;

Matrix mat(Rows rows) {
    const Index r = static_cast<Index>(rows.size());
    const Index c = r > 0 ? static_cast<Index>(rows.begin()->size()) : 0;
    Matrix out(r, c);
    Index i = 0;
    for (const auto& row : rows) {
        Index j = 0;
        for (double v : row) out(i, j++) = v;
        ++i;
    }
    return out;
}

Vector vec(std::initializer_list<double> values) {
    Vector out(static_cast<Index>(values.size()));
    Index i = 0;
    for (double v : values) out(i++) = v;
    return out;
}

SystemSpec example_4_1() {
    SystemSpec s;
    s.n = 3;
    s.m = 2;
    s.alpha = 0.8;
    s.rho = 0.3;
    s.lambda = 0.2;
    s.a = vec({-7.1, 4.2, -2.4});
    s.b = vec({-3.5, 1.2});
    s.A = {mat({{2.6, 0.3, -0.3}, {-0.5, 3.4, -0.1}, {0.2, 0.6, 2.1}}),
           mat({{2.9, 0.5, 0.3}, {-0.4, 3.6, 0.2}, {0.4, 0.8, 2.5}})};
    s.Astar = {mat({{-0.3, 0.2}, {0.1, -0.4}, {-0.2, 0.1}}),
               mat({{0.2, 0.4}, {0.3, -0.3}, {0.1, 0.3}})};
    s.B = {mat({{3.5, 0.4}, {-0.2, 2.6}}), mat({{3.6, 0.7}, {0.2, 2.8}})};
    // entry (2,2) is printed as lower -0.2, upper -0.3; stored in order
    s.Bstar = {mat({{-0.4, 0.1, -0.3}, {0.5, -0.3, 0.6}}),
               mat({{0.5, 0.3, 0.4}, {0.7, -0.2, 0.7}})};
    s.shifts.H = mat({{0.09, 0.06, -0.03}, {-0.05, -0.17, 0.08}, {0.07, -0.06, 0.11}});
    s.shifts.L = mat({{-0.11, -0.03}, {-0.08, 0.09}});
    s.box1 = {vec({3.0, -1.5, 0.5}), vec({4.0, -0.5, 1.5})};
    s.box2 = {vec({1.5, -2.5}), vec({2.5, -1.0})};
    return s;
}

SystemSpec example_4_2() {
    SystemSpec s;
    s.n = 2;
    s.m = 0;
    s.alpha = 0.9;
    s.rho = 0.25;
    s.lambda = 1.0;
    s.a = vec({-4.8, 0.0});
    s.b = Vector(0);
    s.A = {mat({{3.7, -1.1}, {-1.8, 3.1}}), mat({{4.6, 1.3}, {3.8, 3.4}})};
    s.Astar = IntervalMatrix::exact(Matrix(2, 0));
    s.B = IntervalMatrix::exact(Matrix(0, 0));
    s.Bstar = IntervalMatrix::exact(Matrix(0, 2));
    s.shifts.H = mat({{-0.2, 0.0}, {0.0, 0.11}});
    s.shifts.L = Matrix(0, 0);
    s.box1 = {vec({0.0, 0.0}), vec({2.5, 0.5})};
    s.box2 = {Vector(0), Vector(0)};
    return s;
}

// ---- JSON reading -------------------------------------------------------

[[noreturn]] void field_error(const std::string& path, const std::string& msg) {
    throw ParseError("field '" + path + "': " + msg);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) field_error(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) field_error(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

double read_number(const json& j, const std::string& path, bool allow_inf = false) {
    if (j.is_number()) return j.get<double>();
    if (allow_inf && j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    field_error(path, allow_inf ? "expected a number, \"inf\" or \"-inf\"" : "expected a number");
}

Index read_dim(const json& j, const std::string& path) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) field_error(path, "expected a nonnegative integer");
    const auto v = j.get<long long>();
    if (v < 0) field_error(path, "expected a nonnegative integer");
    return static_cast<Index>(v);
}

Vector read_vector(const json& j, Index len, const std::string& path, bool allow_inf = false) {
    if (!j.is_array()) field_error(path, "expected an array");
    if (static_cast<Index>(j.size()) != len) {
        field_error(path, "expected " + std::to_string(len) + " entries, got " + std::to_string(j.size()));
    }
    Vector v(len);
    for (Index i = 0; i < len; ++i) {
        v(i) = read_number(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]", allow_inf);
    }
    return v;
}

Matrix read_matrix(const json& j, Index rows, Index cols, const std::string& path) {
    if (!j.is_array()) field_error(path, "expected an array of rows");
    if (static_cast<Index>(j.size()) != rows) {
        field_error(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
    }
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array()) field_error(row_path, "expected an array");
        if (static_cast<Index>(row.size()) != cols) {
            field_error(row_path, "expected " + std::to_string(cols) + " entries, got " + std::to_string(row.size()));
        }
        for (Index c = 0; c < cols; ++c) {
            m(i, c) = read_number(row[static_cast<std::size_t>(c)], row_path + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

IntervalMatrix read_interval(const json& j, Index rows, Index cols, const std::string& path) {
    return {read_matrix(require(j, "lower", path), rows, cols, join(path, "lower")),
            read_matrix(require(j, "upper", path), rows, cols, join(path, "upper"))};
}

BoxSet read_box(const json& j, Index len, const std::string& path) {
    return {read_vector(require(j, "lo", path), len, join(path, "lo"), true),
            read_vector(require(j, "hi", path), len, join(path, "hi"), true)};
}

// ---- JSON writing -------------------------------------------------------

json write_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json write_vector(const Vector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(write_number(v(i)));
    return out;
}

json write_matrix(const Matrix& m) {
    json out = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
        out.push_back(std::move(row));
    }
    return out;
}

json write_interval(const IntervalMatrix& im) {
    return {{"lower", write_matrix(im.lower)}, {"upper", write_matrix(im.upper)}};
}

SpecDocument parse_document(const json& doc) {
    if (!doc.is_object()) throw ParseError("spec document must be a JSON object");
    SystemSpec s;
    s.n = read_dim(require(doc, "n", ""), "n");
    s.m = read_dim(require(doc, "m", ""), "m");
    const Index n = s.n;
    const Index m = s.m;
    s.alpha = read_number(require(doc, "alpha", ""), "alpha");
    s.rho = read_number(require(doc, "rho", ""), "rho");
    s.lambda = read_number(require(doc, "lambda", ""), "lambda");
    s.a = read_vector(require(doc, "a", ""), n, "a");
    s.b = read_vector(require(doc, "b", ""), m, "b");

    const json& iv = require(doc, "intervals", "");
    s.A = read_interval(require(iv, "A", "intervals"), n, n, "intervals.A");
    s.Astar = read_interval(require(iv, "Astar", "intervals"), n, m, "intervals.Astar");
    s.B = read_interval(require(iv, "B", "intervals"), m, m, "intervals.B");
    s.Bstar = read_interval(require(iv, "Bstar", "intervals"), m, n, "intervals.Bstar");

    const json& sh = require(doc, "shifts", "");
    s.shifts.H = read_matrix(require(sh, "H", "shifts"), n, n, "shifts.H");
    s.shifts.L = read_matrix(require(sh, "L", "shifts"), m, m, "shifts.L");

    const json& bx = require(doc, "boxes", "");
    s.box1 = read_box(require(bx, "box1", "boxes"), n, "boxes.box1");
    s.box2 = read_box(require(bx, "box2", "boxes"), m, "boxes.box2");

    if (auto it = doc.find("gains"); it != doc.end() && !it->is_null()) {
        s.gains = read_vector(*it, n + m, "gains");
    }

    SpecDocument out{validate_system(s), std::nullopt, std::nullopt};

    if (auto it = doc.find("weights"); it != doc.end() && !it->is_null()) {
        Weights w{read_vector(require(*it, "mu", "weights"), n, "weights.mu"),
                  read_vector(require(*it, "tau", "weights"), m, "weights.tau")};
        if ((w.mu.array() <= 0.0).any() || (w.tau.array() <= 0.0).any()) {
            throw ValidationError("nonpositive weights");
        }
        out.weights = std::move(w);
    }
    if (auto it = doc.find("initial"); it != doc.end() && !it->is_null()) {
        out.initial = StateVector{read_vector(require(*it, "x", "initial"), n, "initial.x"),
                                  read_vector(require(*it, "y", "initial"), m, "initial.y")};
    }
    return out;
}

}  // namespace

ScenarioName parse_scenario_name(std::string_view name) {
    if (name == "example-4.1") return ScenarioName::example_4_1;
    if (name == "example-4.2") return ScenarioName::example_4_2;
    if (name == "traffic-gstm") return ScenarioName::traffic_gstm;
    throw ValidationError("unknown scenario: " + std::string(name));
}

std::string to_string(ScenarioName name) {
    switch (name) {
        case ScenarioName::example_4_1: return "example-4.1";
        case ScenarioName::example_4_2: return "example-4.2";
        case ScenarioName::traffic_gstm: return "traffic-gstm";
    }
    return "unknown";
}

Matrix traffic_incidence() {
    // rows a1..a5, columns p1..p3
    return mat({{1, 0, 0}, {0, 1, 1}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}});
}

SystemSpec traffic_system(const TrafficParams& p) {
    const Matrix chi = traffic_incidence();
    Vector lo(5), hi(5);
    for (Index k = 0; k < 5; ++k) {
        lo(k) = p.arc_cost_lower[static_cast<std::size_t>(k)];
        hi(k) = p.arc_cost_upper[static_cast<std::size_t>(k)];
    }

    SystemSpec s;
    s.n = 3;
    s.m = 1;
    s.alpha = p.alpha;
    s.rho = p.rho;
    s.lambda = p.lambda;
    s.a = Vector::Zero(3);
    s.b = Vector::Zero(1);
    // a_ij = sum_m l_m chi_mi chi_mj; chi >= 0, so the bounds are attained at l_lo / l_hi.
    s.A = {chi.transpose() * lo.asDiagonal() * chi, chi.transpose() * hi.asDiagonal() * chi};
    s.Astar = IntervalMatrix::exact(Matrix::Constant(3, 1, -1.0));
    // demand term -r u
    s.B = {Matrix::Constant(1, 1, -p.demand_upper), Matrix::Constant(1, 1, -p.demand_lower)};
    s.Bstar = IntervalMatrix::exact(Matrix::Ones(1, 3));
    s.shifts.H = p.flow_shift * Matrix::Identity(3, 3);
    s.shifts.L = Matrix::Constant(1, 1, p.cost_shift);
    s.box1 = {Vector::Constant(3, p.flow_lo), Vector::Constant(3, p.flow_hi)};
    s.box2 = {Vector::Constant(1, p.cost_lo), Vector::Constant(1, p.cost_hi)};
    Vector g(4);
    g << p.gains[0], p.gains[1], p.gains[2], p.gains[3];
    if ((g.array() != 1.0).any()) s.gains = g;
    return s;
}

SystemSpec builtin_scenario(ScenarioName name) {
    switch (name) {
        case ScenarioName::example_4_1: return example_4_1();
        case ScenarioName::example_4_2: return example_4_2();
        case ScenarioName::traffic_gstm: return traffic_system();
    }
    throw ValidationError("unknown scenario");
}

StateVector builtin_initial_state(ScenarioName name) {
    switch (name) {
        case ScenarioName::example_4_1: return {vec({8.6, -7.3, -5.2}), vec({6.7, -8.5})};
        case ScenarioName::example_4_2: return {vec({5.8, -4.2}), Vector(0)};
        case ScenarioName::traffic_gstm: return {vec({4.0, 1.0, 6.0}), vec({10.0})};
    }
    throw ValidationError("unknown scenario");
}

std::optional<Weights> builtin_weights(ScenarioName name) {
    switch (name) {
        case ScenarioName::example_4_1: return Weights::unit(3, 2);
        case ScenarioName::example_4_2: return Weights{vec({2.0, 1.0}), Vector(0)};
        case ScenarioName::traffic_gstm: return std::nullopt;
    }
    return std::nullopt;
}

std::string serialize(const SystemSpec& s, const std::optional<Weights>& weights,
                      const std::optional<StateVector>& initial) {
    json doc;
    doc["n"] = s.n;
    doc["m"] = s.m;
    doc["alpha"] = s.alpha;
    doc["rho"] = s.rho;
    doc["lambda"] = s.lambda;
    doc["a"] = write_vector(s.a);
    doc["b"] = write_vector(s.b);
    doc["intervals"] = {{"A", write_interval(s.A)},
                        {"Astar", write_interval(s.Astar)},
                        {"B", write_interval(s.B)},
                        {"Bstar", write_interval(s.Bstar)}};
    doc["shifts"] = {{"H", write_matrix(s.shifts.H)}, {"L", write_matrix(s.shifts.L)}};
    doc["boxes"] = {{"box1", {{"lo", write_vector(s.box1.lo)}, {"hi", write_vector(s.box1.hi)}}},
                    {"box2", {{"lo", write_vector(s.box2.lo)}, {"hi", write_vector(s.box2.hi)}}}};
    if (s.gains) doc["gains"] = write_vector(*s.gains);
    if (weights) doc["weights"] = {{"mu", write_vector(weights->mu)}, {"tau", write_vector(weights->tau)}};
    if (initial) doc["initial"] = {{"x", write_vector(initial->x)}, {"y", write_vector(initial->y)}};
    return doc.dump(2) + "\n";
}

SpecDocument load_spec(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    try {
        return parse_document(doc);
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
}

SpecDocument load_spec(std::istream& in) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw ParseError("could not read spec document");
    return load_spec(std::string_view(text));
}

}  // namespace fiipnn
