#include "pitchside/protocol.hpp"

#include <algorithm>
#include <array>
#include <optional>

#include "pitchside/error.hpp"
#include "pitchside/text.hpp"

namespace pitchside::protocol {

namespace {

constexpr std::array<std::string_view, 12> kCallMarkers = {
    "<Call>",  "</Call>",  "<EndCall>",  "</EndCall>",  "<Purpose>", "</Purpose>",
    "<Query>", "</Query>", "<Material>", "</Material>", "<Tool>",    "</Tool>",
};

std::string excerpt(std::string_view s, std::size_t pos = 0, std::size_t len = 200) {
    if (pos > s.size()) pos = s.size();
    return std::string(s.substr(pos, len));
}

std::size_t count_occurrences(std::string_view s, std::string_view needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string_view::npos; pos = s.find(needle, pos + 1)) ++n;
    return n;
}

// Content of <tag>...</tag> inside `block`; nullopt when the open tag is absent.
std::optional<std::string> element(std::string_view block, std::string_view tag) {
    const std::string open = "<" + std::string(tag) + ">";
    const std::string close = "</" + std::string(tag) + ">";
    const auto start = block.find(open);
    if (start == std::string_view::npos) return std::nullopt;
    const auto body = start + open.size();
    const auto end = block.find(close, body);
    if (end == std::string_view::npos) {
        throw Error(ErrorKind::MissingField, "unterminated <" + std::string(tag) + ">",
                    excerpt(block, start));
    }
    if (block.find(open, body) != std::string_view::npos) {
        throw Error(ErrorKind::NestedTag, "repeated <" + std::string(tag) + "> element",
                    excerpt(block, start));
    }
    return std::string(block.substr(body, end - body));
}

std::string required(std::string_view block, std::string_view tag) {
    auto v = element(block, tag);
    if (!v) {
        throw Error(ErrorKind::MissingField, "missing <" + std::string(tag) + "> element",
                    excerpt(block));
    }
    return std::move(*v);
}

struct Block {
    std::string_view body;
    bool terminal;
};

Block locate_call_block(std::string_view text) {
    const std::size_t calls = count_occurrences(text, "<Call>");
    const std::size_t ends = count_occurrences(text, "<EndCall>");
    if (calls + ends == 0) {
        throw Error(ErrorKind::MissingBlock, "no <Call> or <EndCall> block found", excerpt(text));
    }
    if (calls + ends > 1) {
        const auto first_call = text.find("<Call>");
        const auto first_end = text.find("<EndCall>");
        const auto first = std::min(first_call, first_end);
        const auto second = std::min(text.find("<Call>", first + 1), text.find("<EndCall>", first + 1));
        throw Error(ErrorKind::AmbiguousBlock,
                    std::to_string(calls + ends) + " instruction blocks found, expected exactly one",
                    excerpt(text, second));
    }
    const bool terminal = ends == 1;
    const std::string_view open = terminal ? "<EndCall>" : "<Call>";
    const std::string_view close = terminal ? "</EndCall>" : "</Call>";
    const auto start = text.find(open);
    const auto body = start + open.size();
    const auto end = text.find(close, body);
    if (end == std::string_view::npos) {
        throw Error(ErrorKind::MissingBlock, "unterminated " + std::string(open) + " block",
                    excerpt(text, start));
    }
    return {text.substr(body, end - body), terminal};
}

bool has_marker(std::string_view s) {
    return std::any_of(kCallMarkers.begin(), kCallMarkers.end(),
                       [&](std::string_view m) { return text::contains(s, m); });
}

}  // namespace

bool is_valid(const ToolCall& call) {
    if (call.tool_name.empty() || text::trim(call.tool_name) != call.tool_name) return false;
    if (has_marker(call.purpose) || has_marker(call.query) || has_marker(call.tool_name)) return false;
    return std::all_of(call.materials.begin(), call.materials.end(), [](const std::string& m) {
        return !m.empty() && m.find('"') == std::string::npos && !has_marker(m);
    });
}

std::string render_materials(const std::vector<std::string>& materials) {
    if (materials.empty()) return "None";
    std::string out = "[";
    for (std::size_t i = 0; i < materials.size(); ++i) {
        if (i) out += ", ";
        out += '"' + materials[i] + '"';
    }
    out += ']';
    return out;
}

std::vector<std::string> parse_materials(std::string_view payload) {
    const std::string p = text::trim(payload);
    std::vector<std::string> out;
    if (p.empty() || p == "None" || p == "none" || p == "[]") return out;

    if (p.size() >= 2 && p.front() == '[' && p.back() == ']') {
        const std::string_view inner = std::string_view(p).substr(1, p.size() - 2);
        std::size_t i = 0;
        while (i < inner.size()) {
            while (i < inner.size() && std::isspace(static_cast<unsigned char>(inner[i]))) ++i;
            if (i >= inner.size()) break;
            std::string item;
            bool quoted = false;
            if (inner[i] == '"' || inner[i] == '\'') {
                const char q = inner[i];
                const auto close = inner.find(q, i + 1);
                if (close == std::string_view::npos) {
                    item = text::trim(inner.substr(i + 1));
                    i = inner.size();
                } else {
                    item = std::string(inner.substr(i + 1, close - i - 1));
                    i = close + 1;
                }
                quoted = true;
                while (i < inner.size() && inner[i] != ',') ++i;
            } else {
                const auto comma = inner.find(',', i);
                const auto stop = comma == std::string_view::npos ? inner.size() : comma;
                item = text::trim(inner.substr(i, stop - i));
                i = stop;
            }
            if (i < inner.size() && inner[i] == ',') ++i;
            if (item.empty() || (!quoted && item == "None")) continue;
            out.push_back(std::move(item));
        }
        return out;
    }

    std::string single = p;
    if (single.size() >= 2 && (single.front() == '"' || single.front() == '\'') &&
        single.back() == single.front()) {
        single = single.substr(1, single.size() - 2);
    }
    if (!single.empty()) out.push_back(std::move(single));
    return out;
}

std::string render_call(const ToolCall& call) {
    const std::string_view open = call.terminal ? "<EndCall>" : "<Call>";
    const std::string_view close = call.terminal ? "</EndCall>" : "</Call>";
    std::string out;
    out += open;
    out += "\n<Purpose>" + call.purpose + "</Purpose>";
    out += "\n<Query>" + call.query + "</Query>";
    out += "\n<Material>" + render_materials(call.materials) + "</Material>";
    out += "\n<Tool>" + call.tool_name + "</Tool>\n";
    out += close;
    return out;
}

ToolCall parse_call(std::string_view text) {
    const Block block = locate_call_block(text);
    ToolCall call;
    call.terminal = block.terminal;
    call.tool_name = text::trim(required(block.body, "Tool"));
    if (call.tool_name.empty()) {
        throw Error(ErrorKind::MissingField, "empty <Tool> element", excerpt(block.body));
    }
    call.query = required(block.body, "Query");
    call.purpose = element(block.body, "Purpose").value_or("");
    if (auto m = element(block.body, "Material")) call.materials = parse_materials(*m);
    return call;
}

std::string render_step_result(const StepResult& result) {
    return "<StepResult>\n<Answer>" + result.answer + "</Answer>\n</StepResult>";
}

StepResult parse_step_result(std::string_view text) {
    const std::size_t n = count_occurrences(text, "<StepResult>");
    if (n == 0) throw Error(ErrorKind::MissingBlock, "no <StepResult> block found", excerpt(text));
    if (n > 1) {
        const auto second = text.find("<StepResult>", text.find("<StepResult>") + 1);
        throw Error(ErrorKind::AmbiguousBlock, "more than one <StepResult> block", excerpt(text, second));
    }
    const auto start = text.find("<StepResult>") + std::string_view("<StepResult>").size();
    // The answer may itself mention </StepResult>; close the block after </Answer>.
    const auto answer_end = text.find("</Answer>", start);
    const auto search_from = answer_end == std::string_view::npos ? start : answer_end;
    const auto end = text.find("</StepResult>", search_from);
    if (end == std::string_view::npos) {
        throw Error(ErrorKind::MissingBlock, "unterminated <StepResult> block", excerpt(text, start));
    }
    return StepResult{required(text.substr(start, end - start), "Answer")};
}

namespace {

std::string after_label(std::string_view line, std::string_view label) {
    const auto lower = text::to_lower(line);
    const auto pos = lower.find(text::to_lower(label));
    if (pos == std::string::npos) return {};
    return std::string(line.substr(pos + label.size()));
}

bool has_label(std::string_view line, std::string_view label) {
    return text::contains(text::to_lower(line), text::to_lower(label));
}

std::string strip_decoration(std::string s) {
    constexpr std::string_view kDecor = "*[]{}\"'` \t";
    const auto b = s.find_first_not_of(kDecor);
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(kDecor);
    return s.substr(b, e - b + 1);
}

}  // namespace

PlanParse parse_plan(std::string_view text) {
    std::optional<std::string> chain_text;
    std::optional<std::string> known_text;
    for (const auto& raw : text::split_lines(text)) {
        if (!chain_text && has_label(raw, "Tool Chain:")) {
            chain_text = after_label(raw, "Tool Chain:");
        } else if (!known_text && has_label(raw, "Known Info:")) {
            known_text = after_label(raw, "Known Info:");
        }
    }
    if (!chain_text) throw Error(ErrorKind::NoChainLine, "no 'Tool Chain:' line in plan", excerpt(text));

    PlanParse plan;
    std::string chain = text::replace_all(*chain_text, "→", "->");
    for (auto& part : text::split(chain, "->")) {
        auto name = text::trim(strip_decoration(part));
        if (!name.empty()) plan.chain.push_back(std::move(name));
    }
    if (plan.chain.empty()) throw Error(ErrorKind::EmptyChain, "tool chain has no tools", *chain_text);

    if (known_text) {
        const std::string k = text::replace_all(*known_text, "\\$", "$");
        if (k.find('$') != std::string::npos) {
            std::size_t pos = 0;
            while (true) {
                const auto open = k.find('$', pos);
                if (open == std::string::npos) break;
                const auto close = k.find('$', open + 1);
                if (close == std::string::npos) break;
                auto tag = text::trim(k.substr(open + 1, close - open - 1));
                if (!tag.empty()) plan.known_info.push_back(std::move(tag));
                pos = close + 1;
            }
        } else {
            for (auto& part : text::split(k, ",")) {
                auto tag = text::trim(strip_decoration(part));
                if (!tag.empty() && tag != "None") plan.known_info.push_back(std::move(tag));
            }
        }
    }
    return plan;
}

std::string render_chain(const std::vector<std::string>& chain) {
    std::string out = "[";
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i) out += " -> ";
        out += "*" + chain[i] + "*";
    }
    return out + "]";
}

std::string render_known_info(const std::vector<std::string>& known_info) {
    std::string out = "{";
    for (std::size_t i = 0; i < known_info.size(); ++i) {
        if (i) out += ", ";
        out += "$" + known_info[i] + "$";
    }
    return out + "}";
}

}  // namespace pitchside::protocol
