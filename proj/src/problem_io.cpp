#include "polyqn/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace polyqn {
namespace {

using nlohmann::json;

bool same_vector(const Vector& a, const Vector& b) {
    return a.size() == b.size() && (a.size() == 0 || a == b);
}

const json& field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
    return *it;
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(where + ": expected a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ParseError(where + ": expected an integer");
    return v.get<int>();
}

Vector as_vector(const json& v, const std::string& where) {
    if (!v.is_array()) throw ParseError(where + ": expected an array of numbers");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = as_number(v[i], where + "[" + std::to_string(i) + "]");
    }
    return out;
}

void write_vector(std::ostream& os, const Vector& v) {
    os << '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << format_double(v[i]);
    }
    os << ']';
}

std::string quoted(const std::string& s) { return json(s).dump(); }

}  // namespace

bool operator==(const ProblemFile& a, const ProblemFile& b) {
    if (a.x_star.has_value() != b.x_star.has_value()) return false;
    if (a.x_star && !same_vector(*a.x_star, *b.x_star)) return false;
    return a.name == b.name && a.system == b.system && same_vector(a.x0, b.x0);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // keep integral values as JSON floats so -0 survives a round trip
    if (s.find_first_not_of("-0123456789") == std::string::npos) s += ".0";
    return s;
}

void validate_problem(const ProblemFile& p) {
    const auto n = p.system.dimension();
    if (p.x0.size() != n) {
        throw ValidationError("x0: expected length " + std::to_string(n) + ", got " +
                              std::to_string(p.x0.size()));
    }
    if (!p.x_star) return;
    if (p.x_star->size() != n) {
        throw ValidationError("x_star: expected length " + std::to_string(n) + ", got " +
                              std::to_string(p.x_star->size()));
    }
    const double residual = inf_norm(eval_f(p.system, *p.x_star));
    const double bound = 1e-10 * (1.0 + inf_norm(p.system.constant()));
    if (!(residual <= bound)) {
        throw ValidationError("x_star: ||f(x_star)||_inf = " + format_double(residual) +
                              " exceeds " + format_double(bound));
    }
}

ProblemFile parse_problem(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed problem file: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("problem file: top level must be an object");

    const auto& name_v = field(doc, "name", "problem");
    if (!name_v.is_string()) throw ParseError("name: expected a string");
    const int n = as_int(field(doc, "n", "problem"), "n");
    const int max_degree = as_int(field(doc, "max_degree", "problem"), "max_degree");
    Vector b = as_vector(field(doc, "b", "problem"), "b");
    Vector x0 = as_vector(field(doc, "x0", "problem"), "x0");

    const auto& terms_v = field(doc, "terms", "problem");
    if (!terms_v.is_array()) throw ParseError("terms: expected an array");
    std::vector<Monomial> terms;
    terms.reserve(terms_v.size());
    for (std::size_t k = 0; k < terms_v.size(); ++k) {
        const std::string where = "terms[" + std::to_string(k) + "]";
        const auto& t = terms_v[k];
        if (!t.is_object()) throw ParseError(where + ": expected an object");
        const int degree = as_int(field(t, "degree", where), where + ".degree");
        Monomial mono;
        mono.row = as_int(field(t, "row", where), where + ".row");
        mono.coeff = as_number(field(t, "coeff", where), where + ".coeff");
        const auto& vars = field(t, "vars", where);
        if (!vars.is_array()) throw ParseError(where + ".vars: expected an array");
        for (std::size_t i = 0; i < vars.size(); ++i) {
            mono.vars.push_back(as_int(vars[i], where + ".vars[" + std::to_string(i) + "]"));
        }
        if (mono.degree() != degree) {
            throw ValidationError(where + ": degree " + std::to_string(degree) + " but " +
                                  std::to_string(mono.degree()) + " variable indices");
        }
        terms.push_back(std::move(mono));
    }

    std::optional<Vector> x_star;
    if (auto it = doc.find("x_star"); it != doc.end() && !it->is_null()) {
        x_star = as_vector(*it, "x_star");
    }

    try {
        ProblemFile p{name_v.get<std::string>(), PolySystem(n, max_degree, std::move(b), std::move(terms)),
                      std::move(x0), std::move(x_star)};
        validate_problem(p);
        return p;
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
}

std::string serialize_problem(const ProblemFile& p) {
    const auto& sys = p.system;
    std::ostringstream os;
    os << "{\n";
    os << "  \"name\": " << quoted(p.name) << ",\n";
    os << "  \"n\": " << sys.dimension() << ",\n";
    os << "  \"max_degree\": " << sys.max_degree() << ",\n";
    os << "  \"b\": ";
    write_vector(os, sys.constant());
    os << ",\n  \"terms\": [";
    bool first = true;
    for (int m = 1; m <= sys.max_degree(); ++m) {
        for (const auto& t : sys.terms(m)) {
            os << (first ? "\n" : ",\n");
            first = false;
            os << "    {\"degree\": " << m << ", \"row\": " << t.row << ", \"vars\": [";
            for (std::size_t i = 0; i < t.vars.size(); ++i) os << (i ? ", " : "") << t.vars[i];
            os << "], \"coeff\": " << format_double(t.coeff) << '}';
        }
    }
    os << (first ? "],\n" : "\n  ],\n");
    os << "  \"x0\": ";
    write_vector(os, p.x0);
    if (p.x_star) {
        os << ",\n  \"x_star\": ";
        write_vector(os, *p.x_star);
    }
    os << "\n}\n";
    return os.str();
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open problem file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

void save_problem(const ProblemFile& problem, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << serialize_problem(problem);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace polyqn
