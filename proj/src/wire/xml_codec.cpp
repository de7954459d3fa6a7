#include "wire/xml_codec.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "common/text.hpp"

namespace wire {

bool valid_metric_name(std::string_view name) {
    if (name.empty()) return false;
    for (char c : name) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
    }
    return true;
}

void validate(const MetricPacket& packet) {
    if (packet.host.empty()) throw std::invalid_argument("metric packet host is empty");
    if (packet.metrics.empty()) throw std::invalid_argument("metric packet carries no metrics");
    for (const auto& m : packet.metrics) {
        if (!valid_metric_name(m.name)) throw std::invalid_argument("bad metric name '" + m.name + "'");
        if (!std::isfinite(m.value)) throw std::invalid_argument("non-finite value for metric '" + m.name + "'");
    }
}

namespace {

void append_escaped(std::string& out, std::string_view raw) {
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    std::string s(buf);
    size_t dot = s.find('.');
    if (dot != std::string::npos) {
        size_t last = s.find_last_not_of('0');
        if (last == dot) last -= 1;
        s.erase(last + 1);
    }
    if (s == "-0") s = "0";
    return s;
}

std::string encode_metric(const Metric& m) {
    std::string out = "<metric name=\"";
    append_escaped(out, m.name);
    out += "\" val=\"";
    out += format_value(m.value);
    out += "\" units=\"";
    append_escaped(out, m.units);
    out += "\"";
    if (m.group) {
        out += " group=\"";
        append_escaped(out, *m.group);
        out += "\"";
    }
    if (m.gaps) {
        out += " gaps=\"";
        out += std::to_string(*m.gaps);
        out += "\"";
    }
    out += "/>";
    return out;
}

std::string packet_header(const MetricPacket& p) {
    std::string out = "<metrics host=\"";
    append_escaped(out, p.host);
    out += "\" t=\"";
    out += std::to_string(p.t);
    out += "\">";
    return out;
}

constexpr std::string_view kFooter = "</metrics>";

}  // namespace

std::string encode_xml(const MetricPacket& packet) {
    validate(packet);
    std::string out = packet_header(packet);
    for (const auto& m : packet.metrics) out += encode_metric(m);
    out += kFooter;
    return out;
}

std::vector<std::string> encode_datagrams(const MetricPacket& packet, size_t max_datagram) {
    validate(packet);
    const std::string header = packet_header(packet);
    const size_t envelope = header.size() + kFooter.size();

    std::vector<std::string> out;
    std::string body;
    for (const auto& m : packet.metrics) {
        std::string elem = encode_metric(m);
        if (envelope + elem.size() > max_datagram)
            throw std::length_error("metric '" + m.name + "' does not fit in " + std::to_string(max_datagram) +
                                    " byte datagram");
        if (!body.empty() && envelope + body.size() + elem.size() > max_datagram) {
            out.push_back(header + body + std::string(kFooter));
            body.clear();
        }
        body += elem;
    }
    out.push_back(header + body + std::string(kFooter));
    return out;
}

namespace {

// Minimal cursor over the exact wire grammar.
struct Cursor {
    std::string_view s;
    size_t pos = 0;

    bool eof() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
    bool consume(std::string_view token) {
        if (s.substr(pos, token.size()) != token) return false;
        pos += token.size();
        return true;
    }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
};

bool unescape_into(std::string_view raw, std::string& out) {
    out.clear();
    for (size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (c == '<' || c == '>') return false;
        if (c != '&') {
            out.push_back(c);
            continue;
        }
        size_t semi = raw.find(';', i);
        if (semi == std::string_view::npos) return false;
        std::string_view ent = raw.substr(i, semi - i + 1);
        if (ent == "&amp;") out.push_back('&');
        else if (ent == "&lt;") out.push_back('<');
        else if (ent == "&gt;") out.push_back('>');
        else if (ent == "&quot;") out.push_back('"');
        else return false;
        i = semi;
    }
    return true;
}

struct Attr {
    std::string name;
    std::string value;
};

// Parses attributes up to (and including) `closing`, either ">" or "/>".
bool parse_attrs(Cursor& c, std::string_view closing, std::vector<Attr>& out, std::string& err) {
    out.clear();
    while (true) {
        size_t before = c.pos;
        c.skip_ws();
        if (c.consume(closing)) return true;
        if (c.pos == before) {  // attributes must be whitespace-separated
            err = "missing separator before attribute";
            return false;
        }
        if (c.eof()) {
            err = "unterminated tag";
            return false;
        }
        size_t name_start = c.pos;
        while (!c.eof() && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_' || c.peek() == '.'))
            ++c.pos;
        if (c.pos == name_start) {
            err = "expected attribute name";
            return false;
        }
        std::string name(c.s.substr(name_start, c.pos - name_start));
        if (!c.consume("=\"")) {
            err = "expected =\" after attribute name";
            return false;
        }
        size_t val_start = c.pos;
        size_t quote = c.s.find('"', val_start);
        if (quote == std::string_view::npos) {
            err = "unterminated attribute value";
            return false;
        }
        std::string value;
        if (!unescape_into(c.s.substr(val_start, quote - val_start), value)) {
            err = "bad escape in attribute value";
            return false;
        }
        c.pos = quote + 1;
        out.push_back(Attr{std::move(name), std::move(value)});
    }
}

const std::string* find_attr(const std::vector<Attr>& attrs, std::string_view name) {
    for (const auto& a : attrs)
        if (a.name == name) return &a.value;
    return nullptr;
}

}  // namespace

std::optional<MetricPacket> decode_xml(std::string_view data, std::string* error) {
    std::string err;
    auto fail = [&](std::string_view why) -> std::optional<MetricPacket> {
        if (error) *error = std::string(why);
        return std::nullopt;
    };

    Cursor c{data};
    if (!c.consume("<metrics")) return fail("expected <metrics>");
    std::vector<Attr> attrs;
    if (!parse_attrs(c, ">", attrs, err)) return fail(err);

    MetricPacket packet;
    const std::string* host = find_attr(attrs, "host");
    const std::string* t = find_attr(attrs, "t");
    if (!host || host->empty()) return fail("missing host attribute");
    if (!t || !common::parse_i64(*t, packet.t)) return fail("missing or bad t attribute");
    packet.host = *host;

    while (true) {
        c.skip_ws();
        if (c.consume(kFooter)) break;
        if (!c.consume("<metric")) return fail("expected <metric> or </metrics>");
        if (!parse_attrs(c, "/>", attrs, err)) return fail(err);

        Metric m;
        const std::string* name = find_attr(attrs, "name");
        const std::string* val = find_attr(attrs, "val");
        const std::string* units = find_attr(attrs, "units");
        if (!name || !valid_metric_name(*name)) return fail("missing or bad metric name");
        if (!val || !common::parse_f64(*val, m.value)) return fail("missing or bad metric val");
        if (!units) return fail("missing metric units");
        m.name = *name;
        m.units = *units;
        if (const std::string* g = find_attr(attrs, "group")) m.group = *g;
        if (const std::string* k = find_attr(attrs, "gaps")) {
            int64_t gaps = 0;
            if (!common::parse_i64(*k, gaps)) return fail("bad gaps attribute");
            m.gaps = gaps;
        }
        packet.metrics.push_back(std::move(m));
    }

    c.skip_ws();
    if (!c.eof()) return fail("trailing bytes after </metrics>");
    if (packet.metrics.empty()) return fail("packet carries no metrics");
    return packet;
}

}  // namespace wire
