// Copyright 2026 The cipherpdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <signal.h>
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <thread>

#include "cipherpdp/serialize.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int exit_code = -1;
  std::string out;
};

class CliTest : public ::testing::Test {
 protected:
  CliTest() {
    const char* cli = std::getenv("CIPHERPDP_CLI");
#ifdef CIPHERPDP_CLI
    cli_ = cli ? cli : CIPHERPDP_CLI;
#else
    cli_ = cli ? cli : "cipherpdp";
#endif
    dir_ = fs::temp_directory_path() /
           ("cipherpdp-cli-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~CliTest() override { fs::remove_all(dir_); }

  // Runs in `cwd` (relative to the test directory), stdout captured.
  Result run(const std::string& args, const std::string& cwd = ".") {
    fs::create_directories(dir_ / cwd);
    std::string cmd = "cd '" + (dir_ / cwd).string() + "' && '" + cli_ +
                      "' " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
      r.out.append(buf.data(), n);
    int status = ::pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  // TKMA with admin, alice and pip; a store with their server keys.
  void bootstrap(const std::string& cwd = ".", const std::string& seed = "s") {
    std::string s = " --seed " + seed + " ";
    ASSERT_EQ(run(s + "tkma init --dir tkma --profile test", cwd).exit_code, 0);
    for (const char* u : {"admin", "alice", "pip"})
      ASSERT_EQ(run(s + "tkma issue --dir tkma --user " + std::string(u) +
                        " --out keys",
                    cwd)
                    .exit_code,
                0);
    ASSERT_EQ(run(s + "--store st store init --params tkma/params.json", cwd)
                  .exit_code,
              0);
    for (const char* u : {"admin", "alice", "pip"})
      ASSERT_EQ(run(s + "--store st admin import-key --server-key keys/" +
                        std::string(u) + ".server.json",
                    cwd)
                    .exit_code,
                0);
  }

  std::string cli_;
  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("bogus").exit_code, 2);
  EXPECT_EQ(run("tkma init --dir x --profile huge").exit_code, 2);
  EXPECT_EQ(run("admin revoke-user --user a").exit_code, 2);
  EXPECT_EQ(run("--help").exit_code, 0);
}

TEST_F(CliTest, PolicyDecisions) {
  bootstrap();
  auto deployed = run(
      "--store st admin deploy-policy --key keys/admin.client.json --policy "
      "'if and(Location=Cardiology-ward, AT>9#5, AT<17#5) then can "
      "<Cardiologist, read, health-record>'");
  EXPECT_EQ(deployed.exit_code, 0);
  EXPECT_EQ(deployed.out, "policy-1\n");
  std::string ask =
      "--store st requester request --key keys/alice.client.json "
      "--subject Cardiologist --action read --target health-record "
      "--pip-key keys/pip.client.json --attr Location=Cardiology-ward ";
  auto permit = run(ask + "--attr AT=10#5");
  EXPECT_EQ(permit.exit_code, 0);
  EXPECT_EQ(permit.out, "permit\n");
  auto deny = run(ask + "--attr AT=8#5");
  EXPECT_EQ(deny.exit_code, 1);
  EXPECT_EQ(deny.out, "deny: condition-not-satisfied\n");
  auto json = run("--json " + ask + "--attr AT=12#5");
  EXPECT_EQ(json.exit_code, 0);
  auto doc = cipherpdp::parse_json(json.out);
  EXPECT_EQ(doc.at("decision"), "permit");
  EXPECT_EQ(doc.at("ids"), cipherpdp::Json::array({"policy-1"}));
  EXPECT_EQ(run("--store st admin revoke-user --user alice").exit_code, 0);
  auto revoked = run("--json " + ask + "--attr AT=10#5");
  EXPECT_EQ(revoked.exit_code, 2);
  EXPECT_EQ(cipherpdp::parse_json(revoked.out).at("error").at("code"),
            "user-not-found");
}

TEST_F(CliTest, RolesAndConstraints) {
  bootstrap();
  const std::string admin = "--store st admin ";
  const std::string key = " --key keys/admin.client.json ";
  ASSERT_EQ(run(admin + "assign-roles" + key +
                "--requester alice --role Cardiologist")
                .exit_code,
            0);
  ASSERT_EQ(run(admin + "assign-permissions" + key +
                "--role Intern --permission read:patient-list")
                .exit_code,
            0);
  ASSERT_EQ(run(admin + "deploy-hierarchy" + key +
                "--role Intern Doctor Cardiologist --extends Doctor:Intern "
                "Cardiologist:Doctor")
                .exit_code,
            0);
  const std::string rq = "--store st requester ";
  const std::string alice = " --key keys/alice.client.json ";
  std::string access = rq + "access" + alice +
                       "--role Cardiologist --action read --target patient-list";
  EXPECT_EQ(run(access).exit_code, 1);
  EXPECT_EQ(run(rq + "activate-role" + alice + "--role Cardiologist").exit_code,
            0);
  EXPECT_EQ(run(access).exit_code, 0);
  EXPECT_EQ(run(access + " --no-hierarchy").exit_code, 1);
  EXPECT_EQ(run(rq + "activate-role" + alice + "--role Nurse").out,
            "deny: role-not-assigned\n");

  ASSERT_EQ(run(admin + "deploy-constraint" + key +
                "--hbdsod Issue Approve --objtype Purchase-Order")
                .out,
            "constraint-1\n");
  std::string eg = rq + "egrant-request" + alice +
                   "--role Clerk --objtype Purchase-Order ";
  EXPECT_EQ(run(eg + "--action Issue --instance 123").exit_code, 0);
  auto denied = run(eg + "--action Approve --instance 123");
  EXPECT_EQ(denied.exit_code, 1);
  EXPECT_EQ(denied.out, "deny: constraint-violation\n");
  EXPECT_EQ(run(eg + "--action Approve --instance 124").exit_code, 0);
  EXPECT_EQ(run(admin + "deploy-constraint" + key +
                "--cw domain-1=Google domain-1=Microsoft")
                .out,
            "constraint-2\n");
  EXPECT_EQ(run(eg + "--action Read --instance 1 --domain Google").exit_code,
            0);
  EXPECT_EQ(run(eg + "--action Read --instance 2 --domain Microsoft").exit_code,
            1);
  EXPECT_EQ(run(admin + "deploy-constraint" + key + "--hbdsod Issue").exit_code,
            2);
}

TEST_F(CliTest, SeededRunsAreByteIdentical) {
  bootstrap("one", "fixed");
  bootstrap("two", "fixed");
  for (const char* cwd : {"one", "two"})
    ASSERT_EQ(run("--seed fixed --store st admin deploy-policy --key "
                  "keys/admin.client.json --policy 'can <a, b, c>'",
                  cwd)
                  .exit_code,
              0);
  auto files = [&](const std::string& cwd) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir_ / cwd)) {
      if (!e.is_regular_file()) continue;
      std::ifstream in(e.path(), std::ios::binary);
      out[fs::relative(e.path(), dir_ / cwd).string()] = std::string(
          std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    return out;
  };
  auto a = files("one");
  auto b = files("two");
  EXPECT_GT(a.size(), 10u);
  EXPECT_EQ(a, b);
  bootstrap("three", "other");
  EXPECT_NE(files("three").at("tkma/tkma.json"), a.at("tkma/tkma.json"));
}

TEST_F(CliTest, ServeAndConnect) {
  bootstrap();
  fs::path socket = dir_ / "pdp.sock";
  std::string cmd = "cd '" + dir_.string() + "' && exec '" + cli_ +
                    "' --store st serve --socket '" + socket.string() +
                    "' >/dev/null 2>&1 & echo $!";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  ASSERT_TRUE(pipe);
  int pid = 0;
  ASSERT_EQ(std::fscanf(pipe, "%d", &pid), 1);
  ::pclose(pipe);
  for (int i = 0; i < 100 && !fs::exists(socket); ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  ASSERT_TRUE(fs::exists(socket));
  std::string via = "--connect '" + socket.string() + "' ";
  EXPECT_EQ(run(via + "admin deploy-policy --key keys/admin.client.json "
                      "--policy 'can <Nurse, read, chart>'")
                .out,
            "policy-1\n");
  EXPECT_EQ(run(via + "requester request --key keys/alice.client.json "
                      "--subject Nurse --action read --target chart")
                .exit_code,
            0);
  EXPECT_EQ(run(via + "requester request --key keys/alice.client.json "
                      "--subject Nurse --action write --target chart")
                .exit_code,
            1);
  ::kill(pid, SIGTERM);
  for (int i = 0; i < 100; ++i) {
    if (::kill(pid, 0) != 0) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  // The store reflects what the service wrote.
  EXPECT_EQ(run("--store st requester request --key keys/alice.client.json "
                "--subject Nurse --action read --target chart")
                .exit_code,
            0);
}

}  // namespace
