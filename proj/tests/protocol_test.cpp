#include <gtest/gtest.h>

#include "properties.hpp"

namespace maple::bridge {
namespace {

using maple::testing::Rng;

std::string decode_error(std::string_view frame) {
  try {
    decode_message(frame);
  } catch (const ProtocolError& e) {
    return e.code();
  }
  return "ok";
}

TEST(Encode, PauseToggleIsByteExact) {
  WireMessage m{"action", 7, Json{{"type", "pause_toggle"}}};
  EXPECT_EQ(encode_message(m), R"({"op":"action","seq":7,"payload":{"type":"pause_toggle"}})");
}

TEST(Encode, KeyOrderIsFixed) {
  Json payload = Json::object();
  payload["z"] = 1;
  payload["a"] = 2;
  EXPECT_EQ(encode_message({"status", 1, payload}), R"({"op":"status","seq":1,"payload":{"z":1,"a":2}})");
}

TEST(Encode, QuizStatePayload) {
  auto sc = load_scenario(MAPLE_DATA_DIR "/samples/fox_story.json");
  ScriptRunner r(sc, maple::testing::bundled_motions(), PresetTable::defaults());
  while (!r.session().current_state() || r.session().current_state_id() != "q1") r.deliver(Tick{10});
  auto j = state_payload(r.session());
  EXPECT_EQ(j.at("state_id"), "q1");
  EXPECT_EQ(j.at("kind"), "quiz");
  EXPECT_EQ(j.at("prompt"), "Which word did the fox use?");
  EXPECT_EQ(j.at("options"), (Json{"sad", "said", "sand"}));
  EXPECT_EQ(j.at("paused"), false);
}

TEST(Decode, Errors) {
  EXPECT_EQ(decode_error(R"({"seq":1,"payload":{}})"), "MALFORMED");
  EXPECT_EQ(decode_error(R"({"op":"dance","seq":1,"payload":{}})"), "UNKNOWN_OP");
  EXPECT_EQ(decode_error(R"({"op":"hello","payload":{}})"), "MALFORMED");
  EXPECT_EQ(decode_error(R"({"op":"hello","seq":-1,"payload":{}})"), "MALFORMED");
  EXPECT_EQ(decode_error(R"({"op":"hello","seq":1.5,"payload":{}})"), "MALFORMED");
  EXPECT_EQ(decode_error(R"({"op":"hello","seq":1,"payload":[]})"), "MALFORMED");
  EXPECT_EQ(decode_error(R"({"op":"hello","seq":1,"payload":{},"x":1})"), "MALFORMED");
  EXPECT_EQ(decode_error(R"({"op":"action","seq":1,"payload":{"type":"dance"}})"), "MALFORMED");
  EXPECT_EQ(decode_error(R"({"op":"action","seq":1,"payload":{"type":"answer"}})"), "MALFORMED");
  EXPECT_EQ(decode_error(R"({"op":"hello","seq":1,"payload":{"role":"admin"}})"), "MALFORMED");
  EXPECT_EQ(decode_error(R"({"op":"hello","seq":99999999999999999999,"payload":{}})"), "MALFORMED");
  EXPECT_EQ(decode_error("[1,2]"), "MALFORMED");
  EXPECT_EQ(decode_error(""), "MALFORMED");
  EXPECT_EQ(decode_error("\xff\xfe"), "MALFORMED");
}

TEST(Decode, KeepsUnknownPayloadKeys) {
  auto m = decode_message(R"({"op":"action","seq":3,"payload":{"type":"answer","choice":2,"extra":[1]}})");
  EXPECT_EQ(m.payload.at("extra"), Json::array({1}));
  EXPECT_EQ(std::get<AnswerSelected>(action_event(m, 4500)), (AnswerSelected{2, 4500}));
}

TEST(Decode, SeqMustIncrease) {
  InboundChannel in;
  in.decode(R"({"op":"hello","seq":7,"payload":{}})");
  try {
    in.decode(R"({"op":"action","seq":5,"payload":{"type":"pause_toggle"}})");
    FAIL();
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.kind(), ProtocolError::Code::bad_seq);
  }
  EXPECT_THROW(in.decode(R"({"op":"action","seq":7,"payload":{"type":"pause_toggle"}})"), ProtocolError);
  EXPECT_NO_THROW(in.decode(R"({"op":"action","seq":8,"payload":{"type":"pause_toggle"}})"));
  EXPECT_EQ(in.last_seq(), 8);
}

TEST(Outbound, SeqStartsAtOneAndIncreases) {
  OutboundChannel out;
  EXPECT_EQ(out.make("status", Json::object()).seq, 1);
  EXPECT_EQ(out.make("status", Json::object()).seq, 2);
}

TEST(Codec, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    auto m = maple::testing::random_wire_message(rng);
    const auto bytes = encode_message(m);
    ASSERT_EQ(decode_message(bytes), m) << bytes;
    ASSERT_EQ(encode_message(decode_message(bytes)), bytes);
    ASSERT_FALSE(bytes.empty());
    ASSERT_FALSE(std::isspace(static_cast<unsigned char>(bytes.back())));
  }
}

TEST(Codec, DecodeIsTotal) {
  Rng rng(42);
  int accepted = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto frame = maple::testing::fuzz_frame(rng);
    try {
      decode_message(frame);
      ++accepted;
    } catch (const ProtocolError&) {
    } catch (...) {
      FAIL() << "unexpected exception for a frame of " << frame.size() << " bytes";
    }
  }
  EXPECT_GT(accepted, 0);
}

}  // namespace
}  // namespace maple::bridge
