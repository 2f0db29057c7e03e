#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "creditlab/dataset.hpp"
#include "creditlab/rng.hpp"
#include "helpers.hpp"

using namespace creditlab;

TEST_CASE("compute_ratios follows the Table 1 quotients") {
    FinancialStatement s;
    s.chiffre_affaires = 100;
    s.valeur_ajoutee = 50;
    s.excedent_brut_exploitation = 30;
    s.resultat_exploitation = 20;
    s.charges_financieres = 5;
    s.resultat_net = 12;
    s.fonds_propres_nets = 80;
    s.total_bilan = 240;
    s.dettes_lmt = 30;
    s.capitaux_permanents = 60;
    s.cash_flow_net = 15;
    s.cash_flow = 18;
    s.actifs_immobilises = 90;
    s.capitaux_propres = 45;
    s.fonds_de_roulement = 25;
    s.immobilisations_nettes = 75;

    const RatioVector r = compute_ratios(s);
    CHECK(r[0] == 50.0 / 100.0);   // valeur ajoutee / chiffre d'affaires
    CHECK(r[1] == 30.0 / 100.0);   // EBE / CA
    CHECK(r[2] == 20.0 / 100.0);   // resultat d'exploitation / CA
    CHECK(r[3] == 5.0 / 100.0);    // charges financieres / CA
    CHECK(r[4] == 12.0 / 100.0);   // resultat net / CA
    CHECK(r[5] == 12.0 / 80.0);    // resultat net / fonds propres nets
    CHECK(r[6] == 80.0 / 240.0);   // fonds propres nets / total bilan
    CHECK(r[7] == 30.0 / 60.0);    // dettes LMT / capitaux permanents
    CHECK(r[8] == 30.0 / 15.0);    // dettes LMT / cash flow net
    CHECK(r[9] == 12.0 / 240.0);   // resultat net / total bilan
    CHECK(r[10] == 90.0 / 240.0);  // actifs immobilises / actif total
    CHECK(r[11] == 45.0 / 60.0);   // capitaux propres / capitaux permanents
    CHECK(r[12] == 18.0 / 100.0);  // cash flow / CA
    CHECK(r[13] == 25.0 / 100.0);  // fonds de roulement / CA
    CHECK(r[14] == 60.0 / 75.0);   // capitaux permanents / immobilisations nettes
}

TEST_CASE("compute_ratios reports the offending code on zero denominators") {
    FinancialStatement s;
    s.valeur_ajoutee = 50;  // chiffre_affaires stays 0
    s.fonds_propres_nets = 1;
    s.total_bilan = 1;
    s.capitaux_permanents = 1;
    s.cash_flow_net = 1;
    s.immobilisations_nettes = 1;
    try {
        compute_ratios(s);
        FAIL("expected DivisionByZero");
    } catch (const DivisionByZero& e) {
        CHECK(e.ratio_code == "R01");
    }

    s.chiffre_affaires = 10;
    s.cash_flow_net = 0;
    try {
        compute_ratios(s);
        FAIL("expected DivisionByZero");
    } catch (const DivisionByZero& e) {
        CHECK(e.ratio_code == "R09");
    }
}

TEST_CASE("load_dataset reads ratio columns verbatim") {
    std::istringstream in(
        "firm_id,year,label,R02,R08\n"
        "f1,2005,1,0.25,0.5\n"
        "f2,2005,0,-0.1,0.75\n"
        "f3,2006,1,0.0,1.25\n");
    const auto loaded = load_dataset(in);
    REQUIRE(loaded.dataset.records.size() == 3);
    CHECK(loaded.dropped.empty());
    CHECK(loaded.dataset.variable_names == std::vector<std::string>{"R02", "R08"});
    CHECK(loaded.dataset.records[0].firm_id == "f1");
    CHECK(loaded.dataset.records[1].values[0] == -0.1);
    CHECK(loaded.dataset.records[2].label == 1);
}

TEST_CASE("load_dataset computes ratios from statement columns and drops zero denominators") {
    std::ostringstream src;
    src << "firm_id,year,label";
    for (const char* f : kStatementFields) src << ',' << f;
    src << '\n';
    // chiffre_affaires first per kStatementFields order; all denominators 1
    src << "ok,2005,1,100,50,30,20,5,12,80,240,30,60,15,18,90,45,25,75\n";
    src << "zero,2005,0,0,50,30,20,5,12,80,240,30,60,15,18,90,45,25,75\n";
    std::istringstream in(src.str());
    const auto loaded = load_dataset(in);
    REQUIRE(loaded.dataset.records.size() == 1);
    REQUIRE(loaded.dropped.size() == 1);
    CHECK(loaded.dropped[0].line == 3);
    CHECK(loaded.dropped[0].ratio_code == "R01");
    CHECK(loaded.dataset.variable_names.size() == 15);
    CHECK(loaded.dataset.records[0].values[0] == 0.5);
    CHECK(loaded.dataset.records[0].values[7] == 0.5);
}

TEST_CASE("load_dataset rejects bad input") {
    SECTION("label outside {0,1}, reported with its physical row") {
        std::istringstream in(
            "firm_id,year,label,R01\n"
            "f1,2005,1,0.1\n"
            "f2,2005,0,0.2\n"
            "f3,2005,2,0.3\n");
        try {
            load_dataset(in);
            FAIL("expected InvalidLabel");
        } catch (const InvalidLabel& e) {
            CHECK(e.row == 4);
        }
    }
    SECTION("missing label column") {
        std::istringstream in("firm_id,year,R01\nf1,2005,0.1\n");
        try {
            load_dataset(in);
            FAIL("expected MissingColumn");
        } catch (const MissingColumn& e) {
            CHECK(e.name == "label");
        }
    }
    SECTION("mixing statement and ratio columns") {
        std::istringstream in("firm_id,year,label,chiffre_affaires,R01\nf1,2005,1,10,0.1\n");
        CHECK_THROWS_AS(load_dataset(in), InvalidSchema);
    }
    SECTION("unknown column") {
        std::istringstream in("firm_id,year,label,revenue\nf1,2005,1,10\n");
        CHECK_THROWS_AS(load_dataset(in), InvalidSchema);
    }
    SECTION("unparseable number") {
        std::istringstream in("firm_id,year,label,R01\nf1,2005,1,abc\n");
        try {
            load_dataset(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.row == 2);
            CHECK(e.column == "R01");
        }
    }
    SECTION("incomplete statement set") {
        std::istringstream in("firm_id,year,label,chiffre_affaires\nf1,2005,1,10\n");
        CHECK_THROWS_AS(load_dataset(in), MissingColumn);
    }
}

TEST_CASE("dataset round-trips through CSV bit for bit") {
    SplitMix64 rng(99);
    Dataset ds;
    ds.variable_names = {"R01", "R07", "R15"};
    for (int i = 0; i < 40; ++i) {
        // awkward magnitudes on purpose
        const double scale = std::pow(10.0, rng.symmetric(8.0));
        ds.records.push_back(testutil::record("f" + std::to_string(i), 2005 + i % 3, i % 2,
                                              {rng.symmetric(scale), rng.gaussian(),
                                               rng.uniform() * 1e-7}));
    }
    std::ostringstream out;
    save_dataset(out, ds);
    std::istringstream in(out.str());
    const auto loaded = load_dataset(in);
    REQUIRE(loaded.dataset.records.size() == ds.records.size());
    CHECK(loaded.dataset.variable_names == ds.variable_names);
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        CHECK(loaded.dataset.records[i].firm_id == ds.records[i].firm_id);
        CHECK(loaded.dataset.records[i].year == ds.records[i].year);
        CHECK(loaded.dataset.records[i].label == ds.records[i].label);
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(loaded.dataset.records[i].values[j] == ds.records[i].values[j]);
    }
}

TEST_CASE("split_by_period partitions by year") {
    SECTION("study configuration: 60+26 firms over three years") {
        Dataset ds;
        ds.variable_names = {"R01"};
        for (int year : {2005, 2006, 2007}) {
            for (int i = 0; i < 60; ++i)
                ds.records.push_back(testutil::record("p" + std::to_string(i), year, 1, {0.1}));
            for (int i = 0; i < 26; ++i)
                ds.records.push_back(testutil::record("n" + std::to_string(i), year, 0, {0.2}));
        }
        const auto [base, test] = split_by_period(ds, {2005, 2006}, 2007);
        CHECK(base.count_label(1) == 120);
        CHECK(base.count_label(0) == 52);
        CHECK(test.records.size() == 86);
        CHECK(base.records.size() + test.records.size() == ds.records.size());
    }
    SECTION("single year: everything is base, test empty") {
        Dataset ds;
        ds.variable_names = {"R01"};
        for (int i = 0; i < 5; ++i)
            ds.records.push_back(testutil::record("f" + std::to_string(i), 2005, i % 2, {1.0}));
        const auto [base, test] = split_by_period(ds, {2005}, 2006);
        CHECK(base.records.size() == 5);
        CHECK(test.records.empty());
    }
    SECTION("hand partition of a 10-record set across 3 years") {
        Dataset ds;
        ds.variable_names = {"R01"};
        const int years[10] = {2005, 2006, 2007, 2005, 2007, 2006, 2006, 2005, 2007, 2007};
        for (int i = 0; i < 10; ++i)
            ds.records.push_back(testutil::record("f" + std::to_string(i), years[i], i % 2, {1.0}));
        const auto [base, test] = split_by_period(ds, {2005, 2006}, 2007);
        // brute-force partition by the year field
        std::size_t expect_base = 0, expect_test = 0;
        for (int y : years) (y == 2007 ? expect_test : expect_base)++;
        CHECK(base.records.size() == expect_base);
        CHECK(test.records.size() == expect_test);
        for (const auto& r : base.records) CHECK((r.year == 2005 || r.year == 2006));
        for (const auto& r : test.records) CHECK(r.year == 2007);
    }
    SECTION("year outside the split is an error") {
        Dataset ds;
        ds.variable_names = {"R01"};
        ds.records.push_back(testutil::record("f1", 1999, 0, {1.0}));
        try {
            split_by_period(ds, {2005}, 2007);
            FAIL("expected YearOutsideSplit");
        } catch (const YearOutsideSplit& e) {
            CHECK(e.firm_id == "f1");
            CHECK(e.year == 1999);
        }
    }
    SECTION("cardinality is preserved on random year assignments") {
        SplitMix64 rng(7);
        Dataset ds;
        ds.variable_names = {"R01"};
        const std::size_t n = 200;
        for (std::size_t i = 0; i < n; ++i)
            ds.records.push_back(testutil::record("f" + std::to_string(i),
                                                  2005 + static_cast<int>(rng.next() % 3),
                                                  static_cast<int>(rng.next() % 2), {1.0}));
        const auto [base, test] = split_by_period(ds, {2005, 2006}, 2007);
        CHECK(base.records.size() + test.records.size() == n);
    }
}
