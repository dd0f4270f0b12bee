#include "symchaos/serialize.hpp"

#include <gtest/gtest.h>

#include <clocale>

using namespace symchaos;

namespace {

std::vector<BiSequence> one_of_each_kind() {
    BiSequence u = make_universal_sequence(Alphabet(3));
    BiSequence member = splice(make_window_padded({2, 1}, -1, 2), shift(make_universal_sequence(Alphabet(2)), -1), 0);
    return {
        make_periodic({1, 2, 2}, 2),
        BiSequence(EventuallyPeriodic{{2}, {1, 2, 1}, -1, {1, 2}}),
        u,
        make_window_padded({3, 1}, 4, 2),
        member,
        patch(u, {2, 2}, -3),
        scramble_future(member, Alphabet(2)),
    };
}

}  // namespace

TEST(SequenceJson, RoundTripEveryKind) {
    for (const auto& s : one_of_each_kind()) {
        json j = to_json(s);
        BiSequence back = sequence_from_json(json::parse(j.dump()));
        EXPECT_EQ(back, s) << j.dump();
        EXPECT_EQ(back.block(-20, 60), s.block(-20, 60));
    }
}

TEST(SequenceJson, MalformedInputIsAFormatError) {
    EXPECT_THROW(sequence_from_json(json{{"kind", "Nope"}}), FormatError);
    EXPECT_THROW(sequence_from_json(json{{"kind", "Periodic"}}), FormatError);
    EXPECT_THROW(sequence_from_json(json::parse(R"({"kind":"Periodic","block":[],"phase":0})")), std::invalid_argument);
}

TEST(CertificateJson, RoundTripKeepsClaimsVerifiable) {
    UnstableSet U{make_window_padded({1, 2}, -1, 1)};
    MetricParams p(0.5);
    Alphabet a(2);
    std::vector<Certificate> certs = {
        transitivity_witness(U, CylinderSet{{1, 2, 1}, -1}, a, p),
        periodic_density_witness(U.universal_member(a), 1e-3, p),
        sensitivity_witness(U.universal_member(a), 0.25, p, a),
        poisson_recurrence_witness(U, 4, p, a),
        li_yorke_pair(U, 100, p, a),
        stable_set_convergence(make_window_padded({1}, 0, 2), make_window_padded({2}, 0, 2), 8, p),
        unstable_set_convergence(make_window_padded({1}, 1, 2), make_window_padded({2}, 1, 2), 8, p),
    };
    for (const auto& c : certs) {
        json j = to_json(c);
        EXPECT_EQ(j.at("schema"), 1);
        Certificate back = certificate_from_json(json::parse(j.dump(2)));
        EXPECT_EQ(back.kind, c.kind);
        EXPECT_EQ(back.distances.size(), c.distances.size());
        EXPECT_EQ(back.positions.size(), c.positions.size());
        for (std::size_t i = 0; i < c.distances.size(); ++i) {
            EXPECT_EQ(back.distances[i].bound.value, c.distances[i].bound.value);
            EXPECT_EQ(back.distances[i].threshold, c.distances[i].threshold);
        }
        EXPECT_TRUE(verify(back).ok()) << kind_name(c.kind);
        EXPECT_EQ(to_json(back).dump(), j.dump());
    }
}

TEST(CertificateJson, SchemaAndToleranceChecked) {
    json j = to_json(sensitivity_witness(make_periodic({1, 2}), 0.25, MetricParams{}, Alphabet(2)));
    json wrong = j;
    wrong["schema"] = 2;
    EXPECT_THROW(certificate_from_json(wrong), FormatError);
    wrong = j;
    wrong["tolerance"] = 0.0;
    EXPECT_THROW(certificate_from_json(wrong), FormatError);
    wrong = j;
    wrong["metric"]["r"] = 1.5;
    EXPECT_THROW(certificate_from_json(wrong), FormatError);
    wrong = j;
    wrong.erase("distance_claims");
    EXPECT_THROW(certificate_from_json(wrong), FormatError);
}

TEST(Descriptors, Parse) {
    EXPECT_EQ(parse_sequence("periodic:12"), make_periodic({1, 2}));
    EXPECT_EQ(parse_sequence("periodic:1,2,10@3"), make_periodic({1, 2, 10}, 3));
    EXPECT_EQ(parse_sequence("padded:21@-1/2"), make_window_padded({2, 1}, -1, 2));
    EXPECT_EQ(parse_sequence("universal:3"), make_universal_sequence(Alphabet(3)));
    EXPECT_EQ(parse_sequence("eventual:2|121@-1|12"), BiSequence(EventuallyPeriodic{{2}, {1, 2, 1}, -1, {1, 2}}));
    EXPECT_EQ(parse_sequence(R"({"kind":"Periodic","block":[2],"phase":0})"), make_periodic({2}));

    for (const char* bad : {"", "periodic", "periodic:", "periodic:1x", "padded:12", "universal:1", "universal:two",
                            "eventual:1|2|3", "wavy:1", "{not json"})
        EXPECT_THROW(parse_sequence(bad), FormatError) << bad;

    PlanePoint q = parse_point("point:0.25,1");
    EXPECT_EQ(q, (PlanePoint{0.25, 1.0}));
    EXPECT_THROW(parse_point("point:0.25"), FormatError);
    EXPECT_THROW(parse_point("point:2,0"), FormatError);
}

TEST(Numbers, ShortestRoundTripAndLocaleFree) {
    const char* previous = std::setlocale(LC_ALL, nullptr);
    std::string saved = previous ? previous : "C";
    std::setlocale(LC_ALL, "de_DE.UTF-8");  // may be unavailable; the format must not care either way
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333333333");
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(1e-300), "1e-300");
    std::setlocale(LC_ALL, saved.c_str());
    for (double v : {0.1, 2.0 / 3.0, 1e-17, 12345.678})
        EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(ReportsJson, CarrySchemaAndChecks) {
    json d = to_json(check_diameter_condition(Alphabet(2), MetricParams{}, 3));
    EXPECT_EQ(d.at("schema"), 1);
    json s = to_json(check_separation(Alphabet(2), MetricParams{}, 2));
    EXPECT_EQ(s.at("epsilon0"), 0.5);
    json h = to_json(verify_hyperbolic_conditions(HorseshoeParams{}, 2));
    EXPECT_EQ(h.at("schema"), 1);
}
