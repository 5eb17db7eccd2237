// drwitt: command-line front end over the library pipeline with
// deterministic, schema-versioned JSON/CSV artifacts.
//
// exit codes: 0 success, 1 usage error, 2 verification failure,
// 3 budget / precision exhaustion, 4 internal error

#define MPFR_USE_NO_MACRO
#include <mpfr.h>

#include <CLI11.hpp>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <thread>

#include <drwitt/classical.hpp>
#include <drwitt/mvector.hpp>
#include <drwitt/serialize.hpp>
#include <drwitt/symplectic.hpp>

using namespace drwitt;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t nxt = s.find(sep, pos);
        if (nxt == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, nxt - pos));
        pos = nxt + 1;
    }
    return out;
}

std::string strip_space(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace((unsigned char)c)) t += c;
    return t;
}

mpq_class parse_rat(const std::string& s) {
    mpq_class r;
    arg_check(!s.empty() && mpq_set_str(r.get_mpq_t(), s.c_str(), 10) == 0,
              "malformed rational: '" + s + "'");
    arg_check(r.get_den() != 0, "zero denominator: '" + s + "'");
    mpq_canonicalize(r.get_mpq_t());
    return r;
}

std::vector<mpq_class> parse_rat_list(const std::string& s) {
    std::vector<mpq_class> out;
    for (const std::string& p : split(strip_space(s), ',')) out.push_back(parse_rat(p));
    return out;
}

void parse_real(mpfr_ptr x, std::string s, long prec, mpfr_ptr err_acc) {
    if (s.empty() || s == "+") s = "1";
    if (s == "-") s = "-1";
    char* end = nullptr;
    int t = mpfr_strtofr(x, s.c_str(), &end, 10, MPFR_RNDN);
    arg_check(end && *end == '\0', "malformed number: '" + s + "'");
    if (t != 0 && !mpfr_zero_p(x)) {
        mpfr_t ulp;
        mpfr_init2(ulp, 64);
        mpfr_set_ui_2exp(ulp, 1, mpfr_get_exp(x) - prec + 1, MPFR_RNDU);
        mpfr_add(err_acc, err_acc, ulp, MPFR_RNDU);
        mpfr_clear(ulp);
    }
}

// "1.5", "i", "-2i", "a+bi" with decimal or scientific parts
bigcomplex parse_complex(const std::string& text, long prec) {
    std::string s = strip_space(text);
    arg_check(!s.empty(), "empty complex literal");
    long cut = -1;
    for (size_t p = 1; p < s.size(); ++p)
        if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E')
            cut = (long)p;
    std::vector<std::string> parts;
    if (cut > 0) {
        parts = {s.substr(0, cut), s.substr(cut)};
    } else {
        parts = {s};
    }
    bigcomplex z(prec);
    bool saw_re = false, saw_im = false;
    for (std::string p : parts) {
        if (!p.empty() && p.back() == 'i') {
            arg_check(!saw_im, "two imaginary parts in '" + text + "'");
            saw_im = true;
            p.pop_back();
            if (!p.empty() && p.back() == '*') p.pop_back();
            parse_real(z.im, p, prec, z.err);
        } else {
            arg_check(!saw_re, "two real parts in '" + text + "'");
            saw_re = true;
            parse_real(z.re, p, prec, z.err);
        }
    }
    return z;
}

struct out_sink {
    std::string path;

    void write(const std::string& payload) const {
        if (path.empty()) {
            std::cout << payload << "\n";
            return;
        }
        std::ofstream f(path, std::ios::binary);
        arg_check((bool)f, "cannot open output file: " + path);
        f << payload << "\n";
    }
};

std::string envelope(json j) {
    j["schema"] = schema_version;
    return j.dump();
}

// machine-readable output description for --schema
std::string schema_dump(const std::string& cmd, const json& fields) {
    json j;
    j["command"] = cmd;
    j["fields"] = fields;
    return envelope(j);
}

long default_prec() {
    if (const char* e = std::getenv("DRWITT_PREC")) {
        long p = std::atol(e);
        if (p >= 32 && p <= 1 << 20) return p;
    }
    return 256;
}

mvector_spec spec_from_flags(const std::string& sel, const std::string& a_text,
                             const std::string& terms_text, long N) {
    if (sel == "fricke") return make_fricke_spec(N);
    std::vector<mpq_class> a = parse_rat_list(a_text);
    arg_check(a.size() == 2, "--a needs two rationals 'a1,a2'");
    if (sel == "weber") return make_weber_spec(a, N);
    arg_check(sel == "theta", "--sel must be fricke, weber, or theta");
    std::vector<ratio_term> terms;
    for (const std::string& t : split(strip_space(terms_text), ';')) {
        std::vector<std::string> kv = split(t, ',');
        arg_check(kv.size() == 3, "--terms entries are 'k,l,coef'");
        ratio_term r;
        r.k.k = {parse_rat(kv[0])};
        r.l.k = {parse_rat(kv[1])};
        r.coef = parse_rat(kv[2]);
        terms.push_back(r);
    }
    return make_theta_spec(a, N, terms);
}

// evaluation fan-out across components; recognition and assembly stay
// single-threaded
witt_vector build_vector_jobs(const adelic_level& L, const mvector_spec& spec,
                              long prec, const recog_config& cfg, long jobs) {
    if (jobs <= 1) return build_modular_vector(L, spec, prec, cfg);
    if (spec.f == selector_kind::theta)
        arg_check(spec_defined(L, spec, prec),
                  "selector has a pole at some residue");
    const dr_monoid& T = L.monoid();
    const quad_field& F = L.field();
    long n = T.size(), N = L.level();
    bc_pi(2 * prec + 256);  // warm the shared constant cache before threading

    struct slot {
        bigcomplex val, val2;
        bool flag = false, flag2 = false;
    };
    std::vector<slot> slots(n);
    std::atomic<long> next{0};
    std::exception_ptr fail;
    std::mutex fail_mx;
    auto worker = [&] {
        try {
            for (long i = next++; i < n; i = next++) {
                adelic_pair pr = L.encode(i);
                quad_ideal s = L.level_group().class_rep(pr.s);
                quad_ideal s2 = qi_mul(F, s, qi_from_z(F, N + 1));
                slots[i].val =
                    evaluate_component(L, spec, pr.rho, s, prec, &slots[i].flag);
                slots[i].val2 =
                    evaluate_component(L, spec, pr.rho, s2, prec, &slots[i].flag2);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lk(fail_mx);
            if (!fail) fail = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (long t = 0; t < std::min(jobs, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (fail) std::rethrow_exception(fail);

    witt_vector v;
    v.spec = spec;
    v.comp.resize(n);
    v.all_recognized = true;
    v.rep_independent = true;
    for (long i = 0; i < n; ++i) {
        witt_component& c = v.comp[i];
        c.approx = slots[i].val;
        c.renormalized = slots[i].flag;
        bigfloat d = bc_dist_ub(slots[i].val, slots[i].val2);
        bigfloat rad(64);
        mpfr_add(rad, slots[i].val.err, slots[i].val2.err, MPFR_RNDU);
        mpfr_mul_ui(rad, rad, 2, MPFR_RNDU);
        if (slots[i].flag != slots[i].flag2 || mpfr_cmp(d, rad) > 0)
            v.rep_independent = false;
        c.value = recognize(c.approx, cfg);
        if (!c.value.recognized()) v.all_recognized = false;
    }
    return v;
}

json partition_json(const partition& p) {
    json j = json::array();
    for (long b : p) j.push_back(b);
    return j;
}

int run_field_info(long d, const out_sink& out) {
    quad_field F = quad_field::create(d);
    json j;
    j["d"] = F.d;
    j["disc"] = F.disc;
    j["omega_tr"] = F.omega_tr;
    j["omega_nm"] = F.omega_nm;
    j["class_number"] = class_number(F.disc);
    j["unit_order"] = (F.disc == -4) ? 4 : (F.disc == -3) ? 6 : 2;
    out.write(envelope(j));
    return 0;
}

int run_group(long d, const std::string& f_text, const out_sink& out) {
    quad_field F = quad_field::create(d);
    quad_ideal f = f_text.empty() ? qi_from_z(F, 1) : parse_ideal(F, f_text);
    ray_class_group G(F, f);
    json j = json::parse(json_of_group(G));
    j["order"] = G.order().get_si();
    j["modulus"] = json::parse(json_of_ideal(G.modulus()));
    out.write(envelope(j));
    return 0;
}

int run_drmonoid(long d, const std::string& f_text, const out_sink& out) {
    quad_field F = quad_field::create(d);
    dr_monoid T(F, parse_ideal(F, f_text));
    json j = json::parse(json_of_monoid(T));
    out.write(envelope(j));
    return 0;
}

int run_theta(long g, const std::string& tau_text, const std::string& k_text,
              const std::string& u_text, long prec, const out_sink& out) {
    std::vector<std::string> tau_parts = split(strip_space(tau_text), ',');
    arg_check((long)tau_parts.size() == g * g,
              "--tau needs g*g entries, row-major");
    siegel_point tau;
    tau.g = g;
    for (const std::string& p : tau_parts)
        tau.tau.push_back(parse_complex(p, prec + 16));
    theta_char k;
    for (const std::string& p : split(strip_space(k_text), ','))
        k.k.push_back(parse_rat(p));
    arg_check((long)k.k.size() == g, "--k needs g rationals");
    std::vector<bigcomplex> u;
    for (const std::string& p : split(strip_space(u_text), ','))
        u.push_back(parse_complex(p, prec + 16));
    arg_check((long)u.size() == g, "--u needs g entries");

    json j;
    j["value"] = json::parse(json_of_value(theta(k, u, tau, prec)));
    out.write(envelope(j));
    return 0;
}

int run_classical(long d, const std::string& tau_text, const std::string& z_text,
                  long prec, const out_sink& out) {
    bigcomplex tau = parse_complex(tau_text, prec + 16);
    bigcomplex one = bc_from_q(1, 0, prec + 16);
    json j;
    j["j"] = json::parse(json_of_value(j_from_basis(one, tau, prec)));
    if (!z_text.empty()) {
        quad_field F = quad_field::create(d);
        bigcomplex z = parse_complex(z_text, prec + 16);
        j["weber"] = json::parse(
            json_of_value(weber_value(z, one, tau, weber_kind_for(F), prec)));
        j["weber_kind"] = (weber_kind_for(F) == weber_kind::square)  ? "square"
                          : (weber_kind_for(F) == weber_kind::cube) ? "cube"
                                                                    : "generic";
    }
    out.write(envelope(j));
    return 0;
}

json vector_payload(const adelic_level& L, const witt_vector& v) {
    return json::parse(json_of_vector(L, v));
}

int run_mvector_build(long d, long N, const std::string& sel,
                      const std::string& a_text, const std::string& terms_text,
                      long prec, long maxdeg, long jobs,
                      const std::string& format, const out_sink& out) {
    quad_field F = quad_field::create(d);
    adelic_level L(F, N);
    recog_config cfg;
    cfg.prec = prec;
    cfg.maxdeg = maxdeg;
    witt_vector v = build_vector_jobs(L, spec_from_flags(sel, a_text, terms_text, N),
                                      prec, cfg, jobs);
    if (format == "csv") {
        out.write(csv_of_vector(L, v));
    } else {
        out.write(envelope(vector_payload(L, v)));
    }
    return v.rep_independent ? 0 : 2;
}

int run_mvector_verify(long d, long N, const std::string& sel,
                       const std::string& a_text, const std::string& terms_text,
                       long prec, long maxdeg, long jobs,
                       const std::vector<std::string>& frob_texts,
                       const out_sink& out) {
    quad_field F = quad_field::create(d);
    adelic_level L(F, N);
    recog_config cfg;
    cfg.prec = prec;
    cfg.maxdeg = maxdeg;
    witt_vector v = build_vector_jobs(L, spec_from_flags(sel, a_text, terms_text, N),
                                      prec, cfg, jobs);

    json j;
    j["all_recognized"] = v.all_recognized;
    j["rep_independent"] = v.rep_independent;
    bool ok = v.rep_independent;
    bool budget_short = !v.all_recognized;

    j["equivariance"] = json::array();
    if (v.all_recognized) {
        for (const orbit_report& r : verify_equivariance(L, v, prec)) {
            json e;
            e["members"] = r.members;
            e["pass"] = r.pass;
            ok = ok && r.pass;
            j["equivariance"].push_back(e);
        }
    }

    j["congruence"] = partition_json(congruence_of_vector(L, v));

    j["frobenius"] = json::array();
    for (const std::string& pt : frob_texts) {
        frobenius_report fr = frobenius_congruence_check(L, v, parse_ideal(F, pt));
        json e;
        e["p"] = json::parse(json_of_ideal(parse_ideal(F, pt)));
        e["denominator"] = fr.denominator.get_str();
        e["conclusive"] = fr.conclusive;
        e["all_pass"] = fr.all_pass;
        if (!fr.conclusive) budget_short = true;
        else ok = ok && fr.all_pass;
        j["frobenius"].push_back(e);
    }

    out.write(envelope(j));
    if (budget_short) return 3;
    return ok ? 0 : 2;
}

int run_simn_compare(long d, long N, long prec, long maxdeg, long jobs,
                     const out_sink& out) {
    quad_field F = quad_field::create(d);
    adelic_level L(F, N);
    recog_config cfg;
    cfg.prec = prec;
    cfg.maxdeg = maxdeg;
    std::vector<witt_vector> family;
    for (long x = 0; x < N; ++x)
        for (long y = 0; y < N; ++y) {
            if (x == 0 && y == 0) continue;
            family.push_back(build_vector_jobs(
                L, make_weber_spec({mpq_class(x, N), mpq_class(y, N)}, N), prec,
                cfg, jobs));
        }
    simn_report rep = compare_with_simn(L, family);
    json j;
    j["equal"] = rep.equal;
    j["join"] = partition_json(rep.join);
    j["simn"] = partition_json(rep.simn);
    j["informational"] = (d != 1);
    out.write(envelope(j));
    // the identity of join and sim_N is only asserted over Q(i)
    return (d == 1 && !rep.equal) ? 2 : 0;
}

int run_duality(long d, const std::string& f_text, long trials, long seed,
                const out_sink& out) {
    quad_field F = quad_field::create(d);
    dr_monoid T(F, parse_ideal(F, f_text));
    long n = T.size();
    std::mt19937 rng((unsigned)seed);
    std::uniform_int_distribution<long> lab(0, std::max(1L, n / 2));

    std::uniform_int_distribution<long> pick(0, n - 1);
    long round_ok = 0, span_ok = 0, span_trials = std::max(1L, trials / 2);
    for (long t = 0; t < trials; ++t) {
        std::vector<std::pair<long, long>> seeds;
        for (int k = 0; k < 2; ++k) seeds.emplace_back(pick(rng), pick(rng));
        partition Q = congruence_closure(T, seeds);
        if (same_partition(vector_congruence(T, functions_through(Q)), Q)) ++round_ok;
    }
    for (long t = 0; t < span_trials; ++t) {
        std::vector<std::vector<long>> E;
        for (int k = 0; k < 3; ++k) {
            std::vector<long> f(n);
            for (long i = 0; i < n; ++i) f[i] = lab(rng);
            E.push_back(f);
        }
        partition D = vector_congruence(T, E);
        bool constant = true;
        for (const auto& f : E)
            for (long i = 0; i < n; ++i)
                for (long k = i + 1; k < n; ++k)
                    if (D[i] == D[k] && f[i] != f[k]) constant = false;
        if (constant) ++span_ok;
    }

    json j;
    j["roundtrip_pass"] = round_ok;
    j["roundtrip_total"] = trials;
    j["span_pass"] = span_ok;
    j["span_total"] = span_trials;
    out.write(envelope(j));
    return (round_ok == trials && span_ok == span_trials) ? 0 : 2;
}

int run_cmpoint(const std::string& minpoly_text, const std::string& phi_text,
                const std::string& e_text, long n_scale, long prec,
                const out_sink& out) {
    cm_data data;
    data.minpoly = parse_rat_list(minpoly_text);
    for (const std::string& p : split(strip_space(phi_text), ','))
        data.phi.push_back(std::atol(p.c_str()));
    data.e = parse_rat_list(e_text);
    data.n = n_scale;
    long deg = (long)data.minpoly.size() - 1;
    arg_check(deg >= 2 && deg % 2 == 0, "--minpoly must have even degree >= 2");
    for (long i = 0; i < deg; ++i) {
        std::vector<mpq_class> b(deg, 0);
        b[i] = 1;
        data.basis.push_back(b);
    }

    zmat E = riemann_form_cm(data, prec);
    frobenius_result r = frobenius_reduce(E);
    long g = deg / 2;
    std::vector<std::vector<bigcomplex>> rows(2 * g);
    for (long i = 0; i < 2 * g; ++i) {
        rows[i].assign(g, bigcomplex(prec));
        for (long a = 0; a < g; ++a) {
            bigcomplex s(prec);
            for (long jj = 0; jj < deg; ++jj) {
                mpq_class c(r.U.at(i, jj));
                if (c != 0)
                    s = bc_add(s, bc_scale_q(c, cm_embed(data, data.basis[jj],
                                                         data.phi[a], prec)));
            }
            rows[i][a] = s;
        }
    }
    siegel_point tau = tau_from_basis(rows, r.delta);
    siegel_check(tau);

    json j;
    j["riemann_form"] = json::parse(json_of_zmat(E));
    json dl = json::array();
    for (const mpz_class& dd : r.delta.d) dl.push_back(dd.get_si());
    j["delta"] = dl;
    j["lambda_lb"] = siegel_lambda_lb(tau).get_str();
    json tj = json::array();
    for (const bigcomplex& z : tau.tau) tj.push_back(json::parse(json_of_value(z)));
    j["tau"] = tj;
    if (r.delta.embed_ok()) {
        json nulls = json::array();
        for (const bigcomplex& z : theta_null_vector(tau, r.delta, prec))
            nulls.push_back(json::parse(json_of_value(z)));
        j["theta_nulls"] = nulls;
    }
    out.write(envelope(j));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite Deligne-Ribet monoids, Siegel theta functions, and "
                 "modular vectors over imaginary quadratic fields"};
    app.require_subcommand(1);

    long d = 1, N = 2, g = 1, prec = default_prec(), maxdeg = 24, jobs = 1;
    long trials = 5, seed = 7, n_scale = 1;
    std::string f_text, tau_text, k_text = "0", u_text = "0", z_text;
    std::string sel = "weber", a_text = "0,0", terms_text, format = "json";
    std::string out_path;
    std::string minpoly_text = "1,1,1,1,1", phi_text = "1,3", e_text = "1,2,1,1";
    std::vector<std::string> frob_texts;
    bool want_schema = false;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--prec", prec, "working precision in bits");
        c->add_option("--out", out_path, "output file (default stdout)");
        c->add_flag("--schema", want_schema, "print the output schema and exit");
    };

    CLI::App* c_field = app.add_subcommand("field-info", "field constants");
    c_field->add_option("-d", d, "field parameter: K = Q(sqrt(-d))");
    add_common(c_field);

    CLI::App* c_cg = app.add_subcommand("classgroup", "ideal class group");
    c_cg->add_option("-d", d);
    add_common(c_cg);

    CLI::App* c_rg = app.add_subcommand("rayclassgroup", "ray class group mod f");
    c_rg->add_option("-d", d);
    c_rg->add_option("-f,--conductor", f_text);
    add_common(c_rg);

    CLI::App* c_dr = app.add_subcommand("drmonoid", "Deligne-Ribet monoid table");
    c_dr->add_option("-d", d);
    c_dr->add_option("-f,--conductor", f_text);
    add_common(c_dr);

    CLI::App* c_th = app.add_subcommand("theta", "theta function value");
    c_th->add_option("-g", g, "genus");
    c_th->add_option("--tau", tau_text, "period matrix, row-major complex list");
    c_th->add_option("--k", k_text, "characteristic, g rationals");
    c_th->add_option("--u", u_text, "argument, g complex entries");
    add_common(c_th);

    CLI::App* c_cl = app.add_subcommand("classical", "j and Weber values");
    c_cl->add_option("-d", d);
    c_cl->add_option("--tau", tau_text, "period of the lattice Z + Z tau");
    c_cl->add_option("--z", z_text, "torsion point for the Weber value");
    add_common(c_cl);

    auto add_spec_flags = [&](CLI::App* c) {
        c->add_option("-d", d);
        c->add_option("-N", N, "level");
        c->add_option("--sel", sel, "selector: fricke | weber | theta");
        c->add_option("--a", a_text, "torsion index 'a1,a2'");
        c->add_option("--terms", terms_text, "theta terms 'k,l,coef;...'");
        c->add_option("--maxdeg", maxdeg, "recognition degree budget");
        c->add_option("--jobs", jobs, "parallel component evaluations");
    };

    CLI::App* c_mb = app.add_subcommand("mvector-build", "build a modular vector");
    add_spec_flags(c_mb);
    c_mb->add_option("--format", format, "json | csv");
    add_common(c_mb);

    CLI::App* c_mv = app.add_subcommand("mvector-verify",
                                        "equivariance / frobenius verification");
    add_spec_flags(c_mv);
    c_mv->add_option("--frob", frob_texts, "prime ideal literal (repeatable)");
    add_common(c_mv);

    CLI::App* c_sc = app.add_subcommand("simn-compare",
                                        "value congruence join vs adelic sim_N");
    c_sc->add_option("-d", d);
    c_sc->add_option("-N", N);
    c_sc->add_option("--maxdeg", maxdeg);
    c_sc->add_option("--jobs", jobs);
    add_common(c_sc);

    CLI::App* c_du = app.add_subcommand("duality-check",
                                        "congruence / function-family round trip");
    c_du->add_option("-d", d);
    c_du->add_option("-f,--conductor", f_text);
    c_du->add_option("--trials", trials);
    c_du->add_option("--seed", seed);
    add_common(c_du);

    CLI::App* c_cm = app.add_subcommand("cmpoint",
                                        "CM period matrix and theta nulls");
    c_cm->add_option("--minpoly", minpoly_text, "monic minimal polynomial, low first");
    c_cm->add_option("--phi", phi_text, "CM type root indices");
    c_cm->add_option("--e", e_text, "polarizing element coefficients");
    c_cm->add_option("--n", n_scale, "polarization scaling");
    add_common(c_cm);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    out_sink out{out_path};
    try {
        if (want_schema) {
            json fs;
            std::string name;
            if (c_field->parsed()) { name = "field-info"; fs = {{"d", "int"}, {"disc", "int"}, {"omega_tr", "int"}, {"omega_nm", "int"}, {"class_number", "int"}, {"unit_order", "int"}}; }
            else if (c_cg->parsed()) { name = "classgroup"; fs = {{"divisors", "[int]"}, {"generators", "[ideal]"}, {"order", "int"}, {"modulus", "ideal"}}; }
            else if (c_rg->parsed()) { name = "rayclassgroup"; fs = {{"divisors", "[int]"}, {"generators", "[ideal]"}, {"order", "int"}, {"modulus", "ideal"}}; }
            else if (c_dr->parsed()) { name = "drmonoid"; fs = {{"conductor", "ideal"}, {"elements", "[ideal]"}, {"orbit", "[int]"}, {"one", "int"}, {"mul", "[[int]]"}, {"divisors", "[ideal]"}, {"units", "[int]"}}; }
            else if (c_th->parsed()) { name = "theta"; fs = {{"value", "value"}}; }
            else if (c_cl->parsed()) { name = "classical"; fs = {{"j", "value"}, {"weber", "value?"}, {"weber_kind", "string?"}}; }
            else if (c_mb->parsed()) { name = "mvector-build"; fs = {{"conductor", "ideal"}, {"components", "[{class,minpoly,approx,flags}]"}, {"all_recognized", "bool"}, {"rep_independent", "bool"}}; }
            else if (c_mv->parsed()) { name = "mvector-verify"; fs = {{"all_recognized", "bool"}, {"rep_independent", "bool"}, {"equivariance", "[{members,pass}]"}, {"congruence", "[int]"}, {"frobenius", "[{p,denominator,conclusive,all_pass}]"}}; }
            else if (c_sc->parsed()) { name = "simn-compare"; fs = {{"equal", "bool"}, {"join", "[int]"}, {"simn", "[int]"}, {"informational", "bool"}}; }
            else if (c_du->parsed()) { name = "duality-check"; fs = {{"roundtrip_pass", "int"}, {"roundtrip_total", "int"}, {"span_pass", "int"}, {"span_total", "int"}}; }
            else { name = "cmpoint"; fs = {{"riemann_form", "zmat"}, {"delta", "[int]"}, {"lambda_lb", "rational"}, {"tau", "[value]"}, {"theta_nulls", "[value]?"}}; }
            out.write(schema_dump(name, fs));
            return 0;
        }

        if (c_field->parsed()) return run_field_info(d, out);
        if (c_cg->parsed()) return run_group(d, "", out);
        if (c_rg->parsed() || c_dr->parsed() || c_du->parsed())
            arg_check(!f_text.empty(), "-f/--conductor is required");
        if (c_rg->parsed()) return run_group(d, f_text, out);
        if (c_dr->parsed()) return run_drmonoid(d, f_text, out);
        if (c_th->parsed()) return run_theta(g, tau_text, k_text, u_text, prec, out);
        if (c_cl->parsed()) return run_classical(d, tau_text, z_text, prec, out);
        if (c_mb->parsed())
            return run_mvector_build(d, N, sel, a_text, terms_text, prec, maxdeg,
                                     jobs, format, out);
        if (c_mv->parsed())
            return run_mvector_verify(d, N, sel, a_text, terms_text, prec, maxdeg,
                                      jobs, frob_texts, out);
        if (c_sc->parsed()) return run_simn_compare(d, N, prec, maxdeg, jobs, out);
        if (c_du->parsed()) return run_duality(d, f_text, trials, seed, out);
        if (c_cm->parsed())
            return run_cmpoint(minpoly_text, phi_text, e_text, n_scale, prec, out);
        return 1;
    } catch (const budget_error& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return 3;
    } catch (const precision_error& e) {
        std::cerr << "precision: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal: " << e.what() << "\n";
        return 4;
    }
}
