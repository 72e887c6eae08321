#pragma once

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "causalgap/error.hpp"
#include "causalgap/graph.hpp"

// Runs `stmt` and checks that it throws causalgap::Error with the given code.
#define EXPECT_ERROR_CODE(stmt, expected_code)                                                                   \
    do {                                                                                                          \
        try {                                                                                                     \
            stmt;                                                                                                 \
            ADD_FAILURE() << "expected " << causalgap::to_string(expected_code) << " from " #stmt;               \
        } catch (const causalgap::Error& e_) {                                                                   \
            EXPECT_EQ(e_.code(), expected_code) << e_.what();                                                     \
        }                                                                                                         \
    } while (0)

namespace testing_support {

inline causalgap::Gdag make_graph(const std::vector<std::string>& observed, const std::vector<std::string>& latent,
                                  const std::vector<causalgap::Edge>& edges)
{
    causalgap::GraphSpec spec;
    for (const auto& n : observed)
        spec.nodes.push_back({n, true});
    for (const auto& n : latent)
        spec.nodes.push_back({n, false});
    spec.edges = edges;
    return causalgap::Gdag(spec);
}

} // namespace testing_support
