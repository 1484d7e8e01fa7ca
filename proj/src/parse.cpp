#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "fgcalc/difference.hpp"
#include "fgcalc/functions.hpp"
#include "fgcalc/kernel.hpp"
#include "fgcalc/parse.hpp"

namespace fgcalc {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_real(const std::string& s, const std::string& context) {
    std::string t = trim(s);
    if (t.empty() || t == "+" || t == "-") return t == "-" ? -1.0 : 1.0;
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        fail(ErrorKind::Usage, "cannot parse number '" + s + "' in " + context);
    }
    if (used != t.size()) fail(ErrorKind::Usage, "trailing characters in number '" + s + "' in " + context);
    return v;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
    return out;
}

}  // namespace

Complex parse_complex(const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) fail(ErrorKind::Usage, "empty complex value");
    if (t.back() != 'i') return {parse_real(t, "'" + text + "'"), 0.0};
    std::string body = t.substr(0, t.size() - 1);
    // split at the last sign that is not a leading sign or an exponent sign
    size_t cut = std::string::npos;
    for (size_t k = body.size(); k-- > 1;) {
        char c = body[k];
        if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            cut = k;
            break;
        }
    }
    if (cut == std::string::npos) return {0.0, parse_real(body, "'" + text + "'")};
    return {parse_real(body.substr(0, cut), "'" + text + "'"), parse_real(body.substr(cut), "'" + text + "'")};
}

// Shortest of %.15g/%.16g/%.17g that reads back to the same double.
std::string format_real(double v) {
    char buf[40];
    for (int prec : {15, 16, 17}) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string format_complex(const Complex& z) {
    if (z.imag() == 0) return format_real(z.real());
    std::string im = format_real(z.imag());
    if (im[0] != '-') im = "+" + im;
    return format_real(z.real()) + im + "i";
}

std::map<std::string, Complex> parse_kv(const std::string& text, const std::string& context) {
    std::map<std::string, Complex> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        size_t eq = item.find('=');
        if (eq == std::string::npos) fail(ErrorKind::Usage, "expected key=value in " + context + ", got '" + item + "'");
        std::string key = trim(item.substr(0, eq));
        if (key.empty()) fail(ErrorKind::Usage, "empty key in " + context);
        out[key] = parse_complex(item.substr(eq + 1));
    }
    return out;
}

std::string format_kv(const std::map<std::string, Complex>& kv) {
    std::string out;
    for (const auto& [k, v] : kv) out += (out.empty() ? "" : ",") + k + "=" + format_complex(v);
    return out;
}

std::vector<std::string> pair_names() { return {"one-diff", "diff-diff", "onexy-diff", "bibasic", "theta"}; }

std::vector<std::string> all_pair_names() {
    auto v = pair_names();
    v.push_back("broken");
    return v;
}

PairKind pair_kind(const std::string& name) {
    if (name == "one-diff") return PairKind::OneDiff;
    if (name == "diff-diff") return PairKind::DiffDiff;
    if (name == "onexy-diff") return PairKind::OnexyDiff;
    if (name == "bibasic") return PairKind::Bibasic;
    if (name == "theta") return PairKind::Theta;
    if (name == "broken") return PairKind::Broken;
    fail(ErrorKind::Usage, "unknown pair '" + name + "'; valid pairs: " + join(all_pair_names()));
}

PairSpec parse_pair_spec(const std::string& text) {
    std::string t = trim(text);
    size_t colon = t.find(':');
    PairSpec spec;
    spec.name = trim(t.substr(0, colon));
    pair_kind(spec.name);
    if (colon != std::string::npos) spec.params = parse_kv(t.substr(colon + 1), "pair '" + spec.name + "'");
    return spec;
}

std::string format_pair_spec(const PairSpec& spec) {
    return spec.params.empty() ? spec.name : spec.name + ":" + format_kv(spec.params);
}

SequenceSpec parse_sequence_spec(const std::string& text) {
    std::string t = trim(text);
    size_t colon = t.find(':');
    if (colon == std::string::npos)
        fail(ErrorKind::Usage, "sequence needs a kind prefix (geometric:, affine:, list:), got '" + text + "'");
    std::string kind = trim(t.substr(0, colon));
    std::string body = t.substr(colon + 1);
    if (kind == "list") {
        std::vector<Complex> v;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ';'))
            if (!trim(item).empty()) v.push_back(parse_complex(item));
        if (v.empty()) fail(ErrorKind::Usage, "list sequence is empty");
        return SequenceSpec::list(std::move(v));
    }
    auto kv = parse_kv(body, kind + " sequence");
    auto take = [&](std::initializer_list<const char*> keys, Complex fallback, bool required) {
        Complex found = fallback;
        int hits = 0;
        for (const char* k : keys) {
            auto it = kv.find(k);
            if (it != kv.end()) {
                found = it->second;
                kv.erase(it);
                ++hits;
            }
        }
        if (hits > 1) fail(ErrorKind::Usage, "conflicting aliases in " + kind + " sequence '" + text + "'");
        if (hits == 0 && required) fail(ErrorKind::Usage, kind + " sequence '" + text + "' is missing a parameter");
        return found;
    };
    SequenceSpec s;
    if (kind == "geometric") {
        Complex scale = take({"b", "u", "A", "a", "scale", "c"}, {1.0, 0.0}, false);
        Complex ratio = take({"r", "q", "p", "ratio"}, {}, true);
        s = SequenceSpec::geometric(scale, ratio);
    } else if (kind == "affine") {
        Complex u = take({"u", "b", "start"}, {0.0, 0.0}, false);
        Complex h = take({"h", "step"}, {}, true);
        s = SequenceSpec::affine(u, h);
    } else {
        fail(ErrorKind::Usage, "unknown sequence kind '" + kind + "'; valid kinds: geometric, affine, list");
    }
    if (!kv.empty()) fail(ErrorKind::Usage, "unknown key '" + kv.begin()->first + "' in " + kind + " sequence");
    return s;
}

std::string format_sequence_spec(const SequenceSpec& s) {
    switch (s.kind) {
        case SeqKind::Geometric: return "geometric:b=" + format_complex(s.s0) + ",r=" + format_complex(s.s1);
        case SeqKind::Affine: return "affine:u=" + format_complex(s.s0) + ",h=" + format_complex(s.s1);
        case SeqKind::List: {
            std::string out = "list:";
            for (size_t i = 0; i < s.values.size(); ++i) out += (i ? ";" : "") + format_complex(s.values[i]);
            return out;
        }
    }
    return "";
}

const std::vector<FunctionInfo>& function_catalog() {
    static const std::vector<FunctionInfo> catalog = {
        {"inv1mcx", "1/(1-c x)", {{"c", {0.3, 0}}}},
        {"power", "x^r", {{"r", {2, 0}}}},
        {"sinpi", "sin(pi x)", {}},
        {"exp", "e^x", {}},
        {"exp-trunc", "sum_{j<=m} x^j/j!", {{"m", {12, 0}}}},
        {"qbinomial-F", "(x z;q)_inf/(z;q)_inf", {{"z", {0.25, 0}}, {"q", {0.5, 0}}}},
        {"qgauss-F", "(c/a, c x;q)_inf/(c, c x/a;q)_inf", {{"a", {0.6, 0}}, {"c", {0.3, 0}}, {"q", {0.5, 0}}}},
        {"rogers-fine-F", "sum_n (a;q)_n/(x;q)_n z^n", {{"a", {0.4, 0}}, {"z", {0.6, 0}}, {"q", {0.5, 0}}}},
        {"ramanujan-F",
         "(q, y/a, a x, q/(a x);q)_inf/(y, q/a, x, y/(a x);q)_inf",
         {{"a", {0.6, 0}}, {"x", {0.5, 0}}, {"q", {0.5, 0}}}},
        {"heine-F",
         "(c, z;q)_inf/(x, a z;q)_inf 2phi1(a, x; c; q, z)",
         {{"a", {0.3, 0}}, {"c", {0.4, 0}}, {"z", {0.5, 0}}, {"q", {0.5, 0}}}},
        {"jackson-F",
         "(z;q)_inf/(a z;q)_inf 2phi1(a, x; c; q, z)",
         {{"a", {0.3, 0}}, {"c", {0.4, 0}}, {"z", {0.5, 0}}, {"q", {0.5, 0}}}},
        {"rogers-6phi5-F",
         "(aq, aq/(bc), aqx/b, aqx/c;q)_inf/(aq/b, aq/c, aqx, aqx/(bc);q)_inf",
         {{"a", {0.2, 0}}, {"b", {0.5, 0}}, {"c", {0.6, 0}}, {"q", {0.4, 0}}}},
        {"carlitz-lebesgue-F",
         "sum_i (-1)^i q^C(i,2) (b x q^i;q)_inf y^i/((q;q)_i (y, x y q^i;q)_inf)",
         {{"b", {0.2, 0}}, {"x", {0.3, 0}}, {"q", {0.5, 0}}}},
        {"gasper-F",
         "(ap, bp;p)_m (q/x, aqx/b;q)_m/((q, aq/b;q)_m (apx, bp/x;p)_m)",
         {{"a", {0.3, 0}}, {"b", {0.2, 0}}, {"p", {0.4, 0}}, {"q", {0.5, 0}}, {"m", {3, 0}}}},
    };
    return catalog;
}

std::vector<std::string> function_names() {
    std::vector<std::string> v;
    for (const auto& f : function_catalog()) v.push_back(f.name);
    return v;
}

FunctionSpec parse_function_spec(const std::string& text) {
    std::string t = trim(text);
    size_t colon = t.find(':');
    FunctionSpec spec;
    spec.name = trim(t.substr(0, colon));
    const FunctionInfo* info = nullptr;
    for (const auto& f : function_catalog())
        if (f.name == spec.name) info = &f;
    if (!info) fail(ErrorKind::Usage, "unknown function '" + spec.name + "'; valid functions: " + join(function_names()));
    if (colon != std::string::npos) {
        std::string body = t.substr(colon + 1);
        // power:3 is shorthand for power:r=3
        if (body.find('=') == std::string::npos && info->defaults.size() == 1) {
            spec.params[info->defaults.begin()->first] = parse_complex(body);
        } else {
            spec.params = parse_kv(body, "function '" + spec.name + "'");
        }
        for (const auto& [k, v] : spec.params)
            if (!info->defaults.count(k))
                fail(ErrorKind::Usage, "function '" + spec.name + "' has no parameter '" + k + "'");
    }
    return spec;
}

std::string format_function_spec(const FunctionSpec& spec) {
    return spec.params.empty() ? spec.name : spec.name + ":" + format_kv(spec.params);
}

}  // namespace fgcalc
