#pragma once

#include <cstdint>
#include <vector>

#include "glsim/protocol.hpp"

namespace glsim {

// Wire framing for two-process runs. Little-endian:
//   layer: u16 | sender: u8 | length: u16 (payload length in BITS) | payload
// Payload bits are packed LSB-first within each byte. Layer 0xFFFF is
// reserved for out-of-band frames (result collection), which never count
// toward transcript bits.
inline constexpr uint16_t kOutOfBandLayer = 0xFFFF;

std::vector<uint8_t> encode_frame(uint16_t layer, uint8_t sender,
                                  const std::vector<uint8_t>& bits);

struct Frame {
    uint16_t layer = 0;
    uint8_t sender = 0;
    std::vector<uint8_t> bits;
};

// Incremental decoder for a byte stream.
class FrameDecoder {
  public:
    void feed(const uint8_t* data, size_t size);
    // Returns true when a complete frame was extracted.
    bool next(Frame& out);

  private:
    std::vector<uint8_t> buffer_;
};

// Full-duplex byte channel over a socketpair; used to run Alice and Bob (or
// verifier and prover) in separate processes.
class FdChannel {
  public:
    FdChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {}
    ~FdChannel();
    FdChannel(const FdChannel&) = delete;
    FdChannel& operator=(const FdChannel&) = delete;

    void send(uint16_t layer, uint8_t sender, const std::vector<uint8_t>& bits);
    Frame receive();

  private:
    int read_fd_;
    int write_fd_;
    FrameDecoder decoder_;
};

// Runs execute_protocol with Bob in a forked child process, messages crossing
// a real byte stream. The transcript must match the in-process run exactly.
ProtocolRun execute_protocol_two_process(const ProtocolSpec& spec,
                                         const std::vector<uint8_t>& x_bits,
                                         const std::vector<uint8_t>& y_bits,
                                         const std::vector<uint8_t>& randomness = {});

}  // namespace glsim
