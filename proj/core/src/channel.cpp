#include "glsim/channel.hpp"

#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <stdexcept>

#include "glsim/errors.hpp"

namespace glsim {

std::vector<uint8_t> encode_frame(uint16_t layer, uint8_t sender,
                                  const std::vector<uint8_t>& bits) {
    if (bits.size() > 0xFFFF) throw domain_error("frame payload too large");
    std::vector<uint8_t> out;
    out.reserve(5 + (bits.size() + 7) / 8);
    out.push_back(uint8_t(layer & 0xFF));
    out.push_back(uint8_t(layer >> 8));
    out.push_back(sender);
    out.push_back(uint8_t(bits.size() & 0xFF));
    out.push_back(uint8_t(bits.size() >> 8));
    uint8_t byte = 0;
    for (size_t i = 0; i < bits.size(); ++i) {
        byte |= uint8_t((bits[i] & 1) << (i % 8));
        if (i % 8 == 7) {
            out.push_back(byte);
            byte = 0;
        }
    }
    if (bits.size() % 8 != 0) out.push_back(byte);
    return out;
}

void FrameDecoder::feed(const uint8_t* data, size_t size) {
    buffer_.insert(buffer_.end(), data, data + size);
}

bool FrameDecoder::next(Frame& out) {
    if (buffer_.size() < 5) return false;
    uint16_t bit_count = uint16_t(buffer_[3]) | uint16_t(buffer_[4]) << 8;
    size_t payload_bytes = (size_t(bit_count) + 7) / 8;
    if (buffer_.size() < 5 + payload_bytes) return false;
    out.layer = uint16_t(buffer_[0]) | uint16_t(buffer_[1]) << 8;
    out.sender = buffer_[2];
    out.bits.assign(bit_count, 0);
    for (size_t i = 0; i < bit_count; ++i) {
        out.bits[i] = (buffer_[5 + i / 8] >> (i % 8)) & 1;
    }
    buffer_.erase(buffer_.begin(), buffer_.begin() + long(5 + payload_bytes));
    return true;
}

FdChannel::~FdChannel() {
    if (read_fd_ >= 0) ::close(read_fd_);
    if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
}

void FdChannel::send(uint16_t layer, uint8_t sender, const std::vector<uint8_t>& bits) {
    std::vector<uint8_t> frame = encode_frame(layer, sender, bits);
    size_t off = 0;
    while (off < frame.size()) {
        ssize_t n = ::write(write_fd_, frame.data() + off, frame.size() - off);
        if (n < 0) throw std::runtime_error("channel write failed");
        off += size_t(n);
    }
}

Frame FdChannel::receive() {
    Frame frame;
    while (!decoder_.next(frame)) {
        uint8_t buf[512];
        ssize_t n = ::read(read_fd_, buf, sizeof buf);
        if (n <= 0) throw std::runtime_error("channel closed mid-protocol");
        decoder_.feed(buf, size_t(n));
    }
    return frame;
}

ProtocolRun execute_protocol_two_process(const ProtocolSpec& spec,
                                         const std::vector<uint8_t>& x_bits,
                                         const std::vector<uint8_t>& y_bits,
                                         const std::vector<uint8_t>& randomness) {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
        throw std::runtime_error("socketpair failed");
    }
    pid_t pid = ::fork();
    if (pid < 0) throw std::runtime_error("fork failed");
    if (pid == 0) {
        // Child: Bob. Plays every layer, then ships its output shares
        // out-of-band.
        ::close(fds[0]);
        FdChannel channel(fds[1], fds[1]);
        PartyState bob = init_party(spec, false, y_bits, randomness);
        for (int t = 0; t < spec.circuit.depth(); ++t) {
            std::vector<uint8_t> payload = bob_layer_message(spec, t, bob);
            if (!payload.empty()) channel.send(uint16_t(t), 1, payload);
            advance_party(spec, t, false, {}, bob);
        }
        std::vector<uint8_t> shares;
        int d = spec.circuit.depth();
        for (int64_t w = 0; w < spec.circuit.wire_count(); ++w) {
            if (spec.knowledge.at(d, int(w)) == WireView::D) {
                shares.push_back(bob.value[size_t(w)]);
            }
        }
        channel.send(kOutOfBandLayer, 1, shares);
        ::_exit(0);
    }
    ::close(fds[1]);
    FdChannel channel(fds[0], fds[0]);
    PartyState alice = init_party(spec, true, x_bits, randomness);
    ProtocolRun run;
    for (int t = 0; t < spec.circuit.depth(); ++t) {
        std::vector<uint8_t> payload;
        if (!spec.send_wires[size_t(t)].empty()) {
            Frame frame = channel.receive();
            if (frame.layer != uint16_t(t) || frame.sender != 1) {
                throw std::runtime_error("unexpected frame during protocol run");
            }
            payload = frame.bits;
            run.transcript.messages.push_back({t, 1, payload});
        }
        advance_party(spec, t, true, payload, alice);
    }
    Frame shares = channel.receive();
    if (shares.layer != kOutOfBandLayer) {
        throw std::runtime_error("expected out-of-band result frame");
    }
    run.outputs.assign(size_t(spec.circuit.wire_count()), 0);
    int d = spec.circuit.depth();
    size_t cursor = 0;
    for (int64_t w = 0; w < spec.circuit.wire_count(); ++w) {
        if (spec.knowledge.at(d, int(w)) == WireView::D) {
            run.outputs[size_t(w)] = shares.bits.at(cursor++);
        } else {
            run.outputs[size_t(w)] = alice.value[size_t(w)];
        }
    }
    int status = 0;
    ::waitpid(pid, &status, 0);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        throw std::runtime_error("protocol child exited abnormally");
    }
    return run;
}

}  // namespace glsim
