// Copyright 2026 The clh-kit Authors
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


#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"

#include "clh/instances.hpp"
#include "clh/model.hpp"

using namespace clh;
using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir = std::filesystem::temp_directory_path() /
              ("clhkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::create_directories(dir);
    }
    void TearDown() override { std::filesystem::remove_all(dir); }

    std::string write(const std::string& name, const std::string& text) {
        auto p = dir / name;
        std::ofstream(p) << text;
        return p.string();
    }

    std::filesystem::path dir;
};

}  // namespace

TEST_F(CliTest, prove_then_verify) {
    std::string inst = write("ex1.json", instance_to_json(example_ex1()).dump());
    std::string wit = (dir / "w.json").string();
    auto p = run({"prove", inst, "--out", wit});
    ASSERT_EQ(p.code, cli::kOk) << p.err;
    auto v = run({"verify", inst, wit});
    EXPECT_EQ(v.code, cli::kOk) << v.err;
}

TEST_F(CliTest, tampered_witness_is_rejected) {
    Instance star = gen_two_local(star_config(3, 2));
    std::string inst = write("star.json", instance_to_json(star).dump());
    std::string wit = (dir / "w.json").string();
    ASSERT_EQ(run({"prove", inst, "--out", wit}).code, cli::kOk);

    json w;
    std::ifstream(wit) >> w;
    ASSERT_FALSE(w["steps"].empty());
    auto& re = w["steps"][0]["basis"]["re"];
    re[0] = re[0].get<double>() + 0.5;
    std::string bad = write("bad.json", w.dump());
    EXPECT_EQ(run({"verify", inst, bad}).code, cli::kRejected);
}

TEST_F(CliTest, euler_on_two_triangles) {
    auto r = run({"geom", "euler", CLH_TEST_DATA_DIR "/two_triangles.json"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_NE(r.err.find("a=10/3 b=5/2 identity=exact"), std::string::npos) << r.err;
    EXPECT_EQ(json::parse(r.out).at("identity"), "exact");
}

TEST_F(CliTest, malformed_input) {
    std::string junk = write("junk.json", "{\"dims\": [2, ");
    EXPECT_EQ(run({"validate", junk}).code, cli::kMalformed);
    EXPECT_EQ(run({"oracle", (dir / "missing.json").string()}).code, cli::kMalformed);
    std::string not_projector = write("np.json", R"({"dims":[2],"terms":[{"support":[0],"matrix":{"rows":2,"cols":2,"re":[2,0,0,0],"im":[0,0,0,0]}}]})");
    EXPECT_NE(run({"validate", not_projector}).code, cli::kOk);
}

TEST_F(CliTest, unsatisfiable_instance) {
    ClassicalConfig c;
    c.satisfiable = false;
    std::string inst = write("unsat.json", instance_to_json(gen_classical(c)).dump());
    EXPECT_EQ(run({"oracle", inst}).code, cli::kRejected);
    EXPECT_EQ(run({"prove", inst}).code, cli::kRejected);
}

TEST_F(CliTest, gen_and_validate) {
    std::string out = (dir / "toric.json").string();
    ASSERT_EQ(run({"gen", "toric", "--params", R"({"n":2})", "--out", out}).code, cli::kOk);
    EXPECT_EQ(run({"validate", out}).code, cli::kOk);
    EXPECT_EQ(run({"gen", "no_such_family"}).code, cli::kMalformed);
}
