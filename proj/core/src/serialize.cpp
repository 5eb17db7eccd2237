#include "drwitt/serialize.hpp"

#define MPFR_USE_NO_MACRO
#include <mpfr.h>

#include <cctype>
#include <json.hpp>

namespace drwitt {

namespace {

using nlohmann::json;

// integers as JSON numbers while they fit, decimal strings beyond
json jz(const mpz_class& z) {
    if (z.fits_slong_p()) return json(z.get_si());
    return json(z.get_str());
}

mpz_class zj(const json& j) {
    if (j.is_number_integer()) return mpz_class((long)j.get<long long>());
    return mpz_class(j.get<std::string>());
}

std::string decimal(mpfr_srcptr x) {
    long dig = (long)(mpfr_get_prec(x) * 0.30103) + 3;
    std::vector<char> buf(dig + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", (int)dig, x);
    return std::string(buf.data());
}

json value_json(const bigcomplex& z) {
    json j;
    j["re"] = decimal(z.re);
    j["im"] = decimal(z.im);
    if (mpfr_zero_p(z.err))
        j["err2exp"] = nullptr;
    else
        j["err2exp"] = (long)mpfr_get_exp(z.err);
    return j;
}

json ideal_json(const quad_ideal& A) {
    json j;
    j["disc"] = A.disc;
    j["a"] = jz(A.a);
    j["b"] = jz(A.b);
    j["c"] = jz(A.c);
    j["denom"] = jz(A.denom);
    return j;
}

}  // namespace

std::string json_of_value(const bigcomplex& z) { return value_json(z).dump(); }

std::string json_of_ideal(const quad_ideal& A) { return ideal_json(A).dump(); }

quad_ideal ideal_of_json(const std::string& text) {
    json j = json::parse(text);
    quad_ideal A;
    A.disc = j.at("disc").get<long>();
    A.a = zj(j.at("a"));
    A.b = zj(j.at("b"));
    A.c = zj(j.at("c"));
    A.denom = zj(j.at("denom"));
    arg_check(A.denom > 0 && A.c > 0, "ideal_of_json: positive c and denom");
    return A;
}

std::string json_of_group(const ray_class_group& G) {
    json j;
    j["divisors"] = json::array();
    for (const mpz_class& d : G.shape().divisors) j["divisors"].push_back(jz(d));
    j["generators"] = json::array();
    for (const quad_ideal& g : G.generators()) j["generators"].push_back(ideal_json(g));
    return j.dump();
}

std::string json_of_monoid(const dr_monoid& T) {
    json j;
    j["conductor"] = ideal_json(T.conductor());
    j["elements"] = json::array();
    j["orbit"] = json::array();
    for (long i = 0; i < T.size(); ++i) {
        j["elements"].push_back(ideal_json(T.rep(i)));
        j["orbit"].push_back(T.orbit_of(i));
    }
    j["one"] = T.one();
    j["mul"] = json::array();
    for (long i = 0; i < T.size(); ++i) {
        json row = json::array();
        for (long k = 0; k < T.size(); ++k) row.push_back(T.mul(i, k));
        j["mul"].push_back(row);
    }
    j["divisors"] = json::array();
    for (const quad_ideal& d : T.divisor_list()) j["divisors"].push_back(ideal_json(d));
    j["units"] = T.units();
    return j.dump();
}

std::string json_of_zmat(const zmat& M) {
    json j;
    j["rows"] = M.r;
    j["cols"] = M.c;
    j["data"] = json::array();
    for (long i = 0; i < M.r; ++i)
        for (long k = 0; k < M.c; ++k) j["data"].push_back(M.at(i, k).get_str());
    return j.dump();
}

std::string json_of_qmat(const qmat& M) {
    json j;
    j["rows"] = M.r;
    j["cols"] = M.c;
    j["data"] = json::array();
    for (long i = 0; i < M.r; ++i)
        for (long k = 0; k < M.c; ++k) j["data"].push_back(M.at(i, k).get_str());
    return j.dump();
}

std::string json_of_vector(const adelic_level& L, const witt_vector& v) {
    json j;
    j["conductor"] = ideal_json(L.monoid().conductor());
    j["all_recognized"] = v.all_recognized;
    j["rep_independent"] = v.rep_independent;
    j["components"] = json::array();
    for (size_t i = 0; i < v.comp.size(); ++i) {
        const witt_component& c = v.comp[i];
        json e;
        e["class"] = (long)i;
        e["minpoly"] = json::array();
        for (const mpz_class& a : c.value.minpoly) e["minpoly"].push_back(jz(a));
        e["approx"] = value_json(c.approx);
        e["flags"] = json::array();
        if (c.renormalized) e["flags"].push_back("renormalized");
        if (!c.value.recognized()) e["flags"].push_back("unrecognized");
        j["components"].push_back(e);
    }
    return j.dump();
}

std::string csv_of_vector(const adelic_level& L, const witt_vector& v) {
    const dr_monoid& T = L.monoid();
    std::string out = "class,orbit,degree,minpoly\n";
    for (size_t i = 0; i < v.comp.size(); ++i) {
        const witt_component& c = v.comp[i];
        out += std::to_string(i) + "," + std::to_string(T.orbit_of((long)i)) + ",";
        out += std::to_string(c.value.degree()) + ",";
        for (size_t k = 0; k < c.value.minpoly.size(); ++k) {
            if (k) out += " ";
            out += c.value.minpoly[k].get_str();
        }
        out += "\n";
    }
    return out;
}

quad_ideal parse_ideal(const quad_field& F, const std::string& text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace((unsigned char)ch)) t += ch;
    arg_check(!t.empty(), "parse_ideal: empty literal");

    if (t.front() == '[') {
        arg_check(t.back() == ']', "parse_ideal: unterminated HNF literal");
        std::string inner = t.substr(1, t.size() - 2);
        std::vector<mpz_class> parts;
        size_t pos = 0;
        while (pos <= inner.size()) {
            size_t comma = inner.find(',', pos);
            std::string piece = inner.substr(pos, comma == std::string::npos
                                                      ? std::string::npos
                                                      : comma - pos);
            arg_check(!piece.empty(), "parse_ideal: empty HNF entry");
            parts.emplace_back(piece);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        arg_check(parts.size() == 3, "parse_ideal: HNF literal needs [a,b,c]");
        return qi_add(F, qi_from_z(F, parts[0]),
                      qi_principal(F, quad_elem{mpq_class(parts[1]),
                                                mpq_class(parts[2])}));
    }

    std::string inner = t;
    if (t.front() == '(') {
        arg_check(t.back() == ')', "parse_ideal: unterminated principal literal");
        inner = t.substr(1, t.size() - 2);
    }
    arg_check(!inner.empty(), "parse_ideal: empty generator");

    mpz_class x = 0, y = 0;
    size_t pos = 0;
    while (pos < inner.size()) {
        int sign = 1;
        if (inner[pos] == '+') ++pos;
        else if (inner[pos] == '-') { sign = -1; ++pos; }
        size_t start = pos;
        while (pos < inner.size() && std::isdigit((unsigned char)inner[pos])) ++pos;
        std::string digits = inner.substr(start, pos - start);
        if (pos < inner.size() && inner[pos] == '*') ++pos;
        bool symbolic = pos < inner.size() && (inner[pos] == 'i' || inner[pos] == 'w');
        if (symbolic) {
            char sym = inner[pos++];
            arg_check(sym == 'w' || F.disc == -4,
                      "parse_ideal: 'i' only denotes omega for discriminant -4");
            mpz_class coef = digits.empty() ? mpz_class(1) : mpz_class(digits);
            y += sign * coef;
        } else {
            arg_check(!digits.empty(), "parse_ideal: malformed term");
            x += sign * mpz_class(digits);
        }
    }
    return qi_principal(F, quad_elem{mpq_class(x), mpq_class(y)});
}

}  // namespace drwitt
