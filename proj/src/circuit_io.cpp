#include "qnec/circuit.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qnec {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw std::invalid_argument("circuit text line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& s, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        fail(line, "expected a number, got '" + s + "'");
    }
    if (used != s.size()) fail(line, "expected a number, got '" + s + "'");
    return v;
}

int parse_int(const std::string& s, std::size_t line) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        fail(line, "expected an integer, got '" + s + "'");
    }
    if (used != s.size()) fail(line, "expected an integer, got '" + s + "'");
    return v;
}

std::string layers_text(const Circuit& c) {
    std::ostringstream os;
    for (const auto& layer : c.layers) {
        os << "layer " << fmt17(layer.duration) << " :";
        bool first = true;
        for (const auto& g : layer.gates) {
            os << (first ? " " : " ; ") << gate_name(g.kind);
            if (gate_has_angle(g.kind)) os << '(' << fmt17(g.angle) << ')';
            for (int q : g.qubits) os << ' ' << q;
            first = false;
        }
        os << '\n';
    }
    return os.str();
}

Gate parse_gate(const std::string& text, std::size_t line) {
    std::istringstream is(text);
    std::string head;
    is >> head;
    double angle = 0.0;
    std::string name = head;
    const auto open = head.find('(');
    if (open != std::string::npos) {
        if (head.back() != ')') fail(line, "unterminated angle in '" + head + "'");
        name = head.substr(0, open);
        angle = parse_double(head.substr(open + 1, head.size() - open - 2), line);
    }
    const auto kind = gate_from_name(name);
    if (!kind) fail(line, "unknown gate '" + name + "'");
    if (gate_has_angle(*kind) && open == std::string::npos) fail(line, "gate " + name + " needs an angle");
    Gate g(*kind, {}, angle);
    std::string tok;
    while (is >> tok) g.qubits.push_back(parse_int(tok, line));
    return g;
}

}  // namespace

std::string to_text(const Circuit& c) {
    std::ostringstream os;
    os << "qubits " << c.n_qubits << '\n';
    if (c.n_register != c.n_qubits) os << "register " << c.n_register << '\n';
    os << layers_text(c);
    for (const auto& p : c.postselect) os << "post " << p.qubit << ' ' << p.outcome << '\n';
    return os.str();
}

std::string structure_key(const Circuit& c) {
    return std::to_string(c.n_qubits) + '/' + std::to_string(c.n_register) + '\n' + layers_text(c);
}

Circuit circuit_from_text(std::string_view text) {
    Circuit c;
    bool have_qubits = false, have_register = false;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : std::string_view(raw).substr(0, hash));
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "qubits") {
            std::string v;
            ls >> v;
            c.n_qubits = parse_int(v, line_no);
            if (c.n_qubits < 0) fail(line_no, "negative qubit count");
            have_qubits = true;
        } else if (key == "register") {
            std::string v;
            ls >> v;
            c.n_register = parse_int(v, line_no);
            have_register = true;
        } else if (key == "layer") {
            if (!have_qubits) fail(line_no, "'qubits' must precede layers");
            const auto colon = line.find(':');
            if (colon == std::string::npos) fail(line_no, "layer needs ':' after the duration");
            Layer layer;
            layer.duration = parse_double(trim(std::string_view(line).substr(5, colon - 5)), line_no);
            std::string rest = line.substr(colon + 1);
            std::size_t start = 0;
            while (start <= rest.size()) {
                auto semi = rest.find(';', start);
                if (semi == std::string::npos) semi = rest.size();
                const std::string piece = trim(std::string_view(rest).substr(start, semi - start));
                if (!piece.empty()) layer.gates.push_back(parse_gate(piece, line_no));
                start = semi + 1;
            }
            c.layers.push_back(std::move(layer));
        } else if (key == "post") {
            std::string q, o;
            ls >> q >> o;
            c.postselect.push_back(PostSelection{parse_int(q, line_no), parse_int(o, line_no)});
        } else {
            fail(line_no, "unknown directive '" + key + "'");
        }
    }
    if (!have_qubits) throw std::invalid_argument("circuit text: missing 'qubits' line");
    if (!have_register) c.n_register = c.n_qubits;
    validate_circuit(c);
    return c;
}

}  // namespace qnec
