#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <drwitt/serialize.hpp>

using namespace drwitt;

TEST_CASE("ideal literals and json round trips") {
    quad_field F = quad_field::create(1);

    quad_ideal p = parse_ideal(F, "(2+i)");
    CHECK(qi_norm(F, p) == 5);
    CHECK(qi_cmp(p, qi_principal(F, quad_elem{2, 1})) == 0);
    CHECK(qi_cmp(parse_ideal(F, "(3)"), qi_from_z(F, 3)) == 0);
    CHECK(qi_cmp(parse_ideal(F, "3"), qi_from_z(F, 3)) == 0);
    CHECK(qi_cmp(parse_ideal(F, "( 1 - 2*i )"), qi_principal(F, quad_elem{1, -2})) == 0);
    CHECK(qi_cmp(parse_ideal(F, "[5,2,1]"), p) == 0);

    quad_field F5 = quad_field::create(5);
    quad_ideal q = parse_ideal(F5, "(1+w)");
    CHECK(qi_norm(F5, q) == 6);
    CHECK_THROWS(parse_ideal(F5, "(1+i)"));
    CHECK_THROWS(parse_ideal(F, "(1+"));

    quad_ideal back = ideal_of_json(json_of_ideal(p));
    CHECK(qi_cmp(back, p) == 0);
    CHECK(back.disc == p.disc);
}

TEST_CASE("value and matrix payloads are deterministic") {
    bigcomplex z = bc_from_q(mpq_class(1, 3), mpq_class(-2, 7), 128);
    std::string a = json_of_value(z);
    std::string b = json_of_value(z);
    CHECK(a == b);
    CHECK(a.find("\"re\"") != std::string::npos);
    CHECK(a.find("\"err2exp\"") != std::string::npos);

    zmat M(2, 2);
    M.at(0, 0) = 1;
    M.at(1, 1) = -7;
    CHECK(json_of_zmat(M) ==
          "{\"cols\":2,\"data\":[\"1\",\"0\",\"0\",\"-7\"],\"rows\":2}");
}

TEST_CASE("monoid, group, and vector payloads") {
    quad_field F = quad_field::create(1);
    adelic_level L(F, 2);
    std::string tj = json_of_monoid(L.monoid());
    CHECK(tj.find("\"mul\"") != std::string::npos);
    CHECK(tj == json_of_monoid(L.monoid()));

    std::string gj = json_of_group(L.level_group());
    CHECK(gj.find("\"divisors\"") != std::string::npos);

    recog_config cfg;
    witt_vector v = build_modular_vector(
        L, make_weber_spec({0, mpq_class(1, 2)}, 2), 192, cfg);
    std::string vj = json_of_vector(L, v);
    CHECK(vj.find("\"minpoly\"") != std::string::npos);
    CHECK(vj.find("\"renormalized\"") != std::string::npos);

    std::string csv = csv_of_vector(L, v);
    CHECK(csv.substr(0, 26) == "class,orbit,degree,minpoly");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
