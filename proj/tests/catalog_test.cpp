#include <gtest/gtest.h>

#include "causalgap/catalog.hpp"

#include "helpers.hpp"

using namespace causalgap;

TEST(Catalog, EveryEntryMeetsItsPropertyList)
{
    for (const auto& f : catalog::check_properties())
        ADD_FAILURE() << f.entry << ": " << f.property;
}

TEST(Catalog, ListAndLookup)
{
    const auto names = catalog::list();
    EXPECT_EQ(names.size(), catalog::entries().size());
    for (const char* name : {"bell", "triangle", "evans-fig4a", "evans-fig4b", "hlp-15", "hlp-16", "hlp-17",
                             "hlp-20", "hlp-21", "appendix-8"})
        EXPECT_NE(std::find(names.begin(), names.end(), name), names.end()) << name;
    EXPECT_ERROR_CODE(catalog::get("no-such-graph"), ErrorCode::UnknownEntry);
}

TEST(Catalog, EntriesAreDocumented)
{
    for (const auto& e : catalog::entries()) {
        EXPECT_FALSE(e.provenance.empty()) << e.name;
        EXPECT_FALSE(e.properties.empty()) << e.name;
        if (e.fine_grained_witness) {
            EXPECT_EQ(e.fine_grained_witness->name_set(), e.graph.observed_nodes()) << e.name;
        }
    }
    EXPECT_TRUE(catalog::get("hlp-21").provisional);
}

TEST(Catalog, WitnessDistributions)
{
    EXPECT_EQ(*catalog::get("hlp-20").fine_grained_witness, tilde_p_prime());
    for (const char* name : {"hlp-15", "hlp-16"})
        EXPECT_TRUE(catalog::get(name).fine_grained_witness.has_value()) << name;
}

TEST(Catalog, ExportUsesCiSyntax)
{
    const std::string text = catalog::export_properties(catalog::get("hlp-20"));
    EXPECT_NE(text.find("! D _||_ F | A,B\n"), std::string::npos) << text;
    EXPECT_NE(text.find("A _||_ D\n"), std::string::npos) << text;
}
