#include "fbl/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace fbl {

namespace {

std::vector<std::string> split_words(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> words;
    for (std::string w; ss >> w;) words.push_back(w);
    return words;
}

std::int64_t parse_integer(const std::string& word, int line, const char* what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
    if (ec != std::errc() || ptr != word.data() + word.size()) {
        throw ParseError(line, std::string("expected integer ") + what + ", got '" + word + "'");
    }
    return v;
}

}  // namespace

Instance parse_instance(std::istream& in) {
    std::optional<std::int64_t> capacity;
    std::optional<Rat> alpha;
    std::vector<Packet> packets;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        auto words = split_words(raw);
        if (words.empty()) continue;

        const std::string& directive = words[0];
        if (directive == "buffer") {
            if (words.size() != 2) throw ParseError(line_no, "usage: buffer <B>");
            if (capacity) throw ParseError(line_no, "duplicate buffer directive");
            capacity = parse_integer(words[1], line_no, "capacity");
            if (*capacity < 1) throw ParseError(line_no, "capacity must be at least 1");
        } else if (directive == "alpha") {
            if (words.size() != 2) throw ParseError(line_no, "usage: alpha <num>/<den>");
            if (alpha) throw ParseError(line_no, "duplicate alpha directive");
            try {
                alpha = Rat::parse(words[1]);
            } catch (const std::exception& e) {
                throw ParseError(line_no, e.what());
            }
            if (*alpha <= Rat(1)) throw ParseError(line_no, "alpha must exceed 1");
        } else if (directive == "packet") {
            if (words.size() != 4) throw ParseError(line_no, "usage: packet <step> <seq> <one|alpha>");
            ArrivalKey key{parse_integer(words[1], line_no, "step"), parse_integer(words[2], line_no, "seq")};
            if (key.step < 1) throw ParseError(line_no, "step must be positive");
            if (key.seq < 0) throw ParseError(line_no, "seq must be non-negative");
            PacketClass klass;
            if (words[3] == "one") {
                klass = PacketClass::One;
            } else if (words[3] == "alpha") {
                klass = PacketClass::Alpha;
            } else {
                throw ParseError(line_no, "packet class must be 'one' or 'alpha', got '" + words[3] + "'");
            }
            if (!packets.empty() && !(packets.back().key < key)) {
                throw ParseError(line_no, "packet " + to_string(key) + " is not after " +
                                              to_string(packets.back().key));
            }
            packets.push_back(Packet{PacketId{static_cast<std::uint32_t>(packets.size())}, key, klass});
        } else {
            throw ParseError(line_no, "unknown directive '" + directive + "'");
        }
    }
    if (!capacity) throw ParseError(line_no, "missing buffer directive");
    if (!alpha) throw ParseError(line_no, "missing alpha directive");

    Instance inst;
    inst.capacity = *capacity;
    inst.alpha = *alpha;
    inst.arrivals = std::move(packets);
    return inst;
}

Instance parse_instance(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_instance(in);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
    return parse_instance(in);
}

std::string format_instance(const Instance& inst) {
    std::ostringstream out;
    out << "buffer " << inst.capacity << "\n";
    out << "alpha " << inst.alpha.str() << "\n";
    for (const Packet& p : inst.arrivals) {
        out << "packet " << p.key.step << " " << p.key.seq << " " << to_string(p.klass) << "\n";
    }
    return out.str();
}

}  // namespace fbl
