// Copyright 2026 The annealbench Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <memory>

#include "annealbench/errors.hpp"
#include "annealbench/io.hpp"

namespace annealbench {
namespace {

namespace fs = std::filesystem;

const std::string kData = ANNEALBENCH_DATA_DIR;

fs::path scratch_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("annealbench_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Files, WriteReadAndMissing) {
  const auto dir = scratch_dir("files");
  write_file(dir / "a.txt", "hello\n");
  EXPECT_EQ(read_file(dir / "a.txt"), "hello\n");
  EXPECT_EQ(sha256_file(dir / "a.txt"), sha256_hex("hello\n"));
  EXPECT_THROW(read_file(dir / "missing"), DataError);
  EXPECT_EQ(dump(Json{{"b", 1}, {"a", 2}}), "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
}

TEST(Topology, JsonRoundTrip) {
  const std::vector<int> fq{3, 40};
  const std::vector<Coupler> fc{Coupler::make(0, 4)};
  const auto topo = ChimeraTopology::build(3, fq, fc);
  EXPECT_EQ(topology_from_json(topology_to_json(topo)), topo);
  EXPECT_THROW(topology_from_json(Json{{"L", 2}, {"faulty_qubits", {99}}}), DataError);
  EXPECT_THROW(topology_from_json(Json{{"faulty_qubits", Json::array()}}), DataError);
}

TEST(Instance, JsonRoundTripPreservesEverything) {
  const auto mask = load_fault_mask(kData + "/topologies/dw2kq_like_faults.json");
  const auto inst = gen_logical_planted(std::make_shared<const ChimeraTopology>(mask), 0.5, kGadgetFraction, 3);
  const auto dir = scratch_dir("instance");
  save_instance(dir / "i.json", inst);
  const auto back = load_instance(dir / "i.json");
  EXPECT_EQ(back, inst);
  EXPECT_EQ(back.decomposition().size(), inst.decomposition().size());
  EXPECT_EQ(back.metadata().seed, 3u);
  EXPECT_EQ(back.metadata().cls, InstanceClass::logical);
  EXPECT_TRUE(frustration_certificate(back).certified);
  EXPECT_EQ(instance_to_json(back), instance_to_json(inst));
}

TEST(Instance, MalformedInputIsDataError) {
  auto j = instance_to_json(gadget_hamiltonian());
  auto bad = j;
  bad["format"] = "something-else";
  EXPECT_THROW(instance_from_json(bad), DataError);
  bad = j;
  bad.erase("topology");
  EXPECT_THROW(instance_from_json(bad), DataError);
  const auto dir = scratch_dir("badinst");
  write_file(dir / "x.json", "{not json");
  EXPECT_THROW(load_instance(dir / "x.json"), DataError);
}

TEST(RunLength, RoundTripAndErrors) {
  const std::vector<int> fq{5};
  const auto topo = ChimeraTopology::build(1, fq);
  SpinState s{1, 1, 1, -1, -1, 0, 1, -1};
  EXPECT_EQ(rle_encode(topo, s), "3+2-1+1-");
  EXPECT_EQ(rle_decode(topo, "3+2-1+1-"), s);
  EXPECT_THROW(rle_decode(topo, "3+2-"), DataError);
  EXPECT_THROW(rle_decode(topo, "9+"), DataError);
  EXPECT_THROW(rle_decode(topo, "3x4+"), DataError);
}

TEST(Record, RoundTrip) {
  const auto g = gadget_hamiltonian();
  AnnealRecord r{4, SpinState{1, -1, 1, 1, -1, -1, 1, 1}, Thirds::from_numerator(-20), false, 123456789012345ULL};
  EXPECT_EQ(record_from_json(g.topology(), record_to_json(g.topology(), r)), r);
}

TEST(Fit, JsonRoundTripIsBitExact) {
  FitResult f;
  f.family = FitFamily::hfs_form;
  f.params = {{"a", 0.1 + 0.2, 1.0 / 3.0, 2.0 / 3.0}, {"b", 2.221, 1.768, 2.674}, {"c", 9.897, 9.834, 9.96}};
  f.derived["x_star"] = std::exp(0.3);
  f.diagnostics = {"start 1: converged"};
  f.residual_norm = 1e-17;
  f.ci_method = CiMethod::two_sigma;
  const auto back = fit_from_json(Json::parse(dump(fit_to_json(f))));
  EXPECT_EQ(back, f);
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    EXPECT_TRUE(bit_equal(back.params[i].value, f.params[i].value));
    EXPECT_TRUE(bit_equal(back.params[i].ci_lo, f.params[i].ci_lo));
  }
  EXPECT_THROW(fit_from_json(Json{{"family", "cubic"}, {"params", Json::array()}}), DataError);
}

TEST(ReferenceFits, TabulatedRowsLoad) {
  const auto rows = load_reference_fits(kData + "/reference_fits/optimum_fits.csv");
  bool found_dw = false, found_hfs = false;
  for (const auto& r : rows) {
    if (r.solver == "DW2KQ" && r.instance_class == "logical" && r.L == 16) {
      found_dw = true;
      EXPECT_EQ(r.fit.family, FitFamily::quadratic_log);
      EXPECT_EQ(r.fit.param("a").value, 0.221);
      EXPECT_EQ(r.fit.param("b").value, 3.798);
      EXPECT_EQ(r.fit.param("c").value, 9.557);
      EXPECT_EQ(r.fit.param("b").ci_lo, 3.798 - 0.104);
    }
    if (r.solver == "HFS" && r.instance_class == "logical" && r.L == 8) {
      found_hfs = true;
      EXPECT_EQ(r.fit.param("a").value, 0.841);
      EXPECT_EQ(r.fit.param("b").value, 2.221);
      EXPECT_EQ(r.fit.param("c").value, 9.897);
    }
  }
  EXPECT_TRUE(found_dw);
  EXPECT_TRUE(found_hfs);
}

TEST(Csv, ParseRulesAndErrors) {
  const auto rows = parse_csv("# comment\nx,y\n1,2\n\n3,4\r\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].at("y"), "4");
  EXPECT_THROW(parse_csv("x,y\n1\n"), DataError);
  EXPECT_THROW(parse_csv("# only a comment\n"), DataError);
}

TEST(Csv, SpectrumAndCurveFormats) {
  SpectrumSlice a{0.5, {-1.0, 0.5}, {0.0, 7.0}};
  EXPECT_EQ(spectrum_csv(std::vector<SpectrumSlice>{a}), "s,E0,E1,HW0,HW1\n0.5,-1,0.5,0,7\n");
  QuantileCurve c{0.5, {10, 20}, {1.5, 2.25}};
  EXPECT_EQ(quantile_curve_csv(c), "effort,lnTTS_0.5\n10,1.5\n20,2.25\n");
}

}  // namespace
}  // namespace annealbench
