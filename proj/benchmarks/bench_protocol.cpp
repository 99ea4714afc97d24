#include <benchmark/benchmark.h>

#include "auav/integration/protocol.hpp"

using namespace auav::integration;

static AcpMessage sample_alert() {
  AcpMessage m;
  m.msg_id = "msg-000042";
  m.from = "uav-1";
  m.to = "operator";
  m.kind = AcpMessage::Kind::alert;
  m.payload = {{"severity", "critical"},
               {"gps", {{"lat", 52.5201}, {"lon", 13.4049}, {"alt", 0.0}}},
               {"image_ref", "frames/21600_P-02_annotated.png"},
               {"recommended_actions", {"land_and_deploy", "alert.dispatch"}}};
  return m;
}

static void BM_EncodeAlert(benchmark::State& state) {
  const Message m = sample_alert();
  for (auto _ : state) benchmark::DoNotOptimize(encode_message(m));
}
BENCHMARK(BM_EncodeAlert);

static void BM_DecodeAlert(benchmark::State& state) {
  const std::string bytes = encode_message(sample_alert());
  for (auto _ : state) benchmark::DoNotOptimize(decode_message(bytes));
}
BENCHMARK(BM_DecodeAlert);
