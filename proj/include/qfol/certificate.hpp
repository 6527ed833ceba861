#pragma once

#include <string>
#include <vector>

namespace qfol {

/// Outcome of a machine check. Negative certificates always carry witness
/// lines naming what failed; positive ones may carry notes (bounds used,
/// provisional degrees).
struct Certificate {
    bool ok = true;
    std::string title;
    std::vector<std::string> lines;

    explicit Certificate(std::string t = "") : title(std::move(t)) {}

    void note(const std::string& s) { lines.push_back(s); }

    void fail(const std::string& s)
    {
        ok = false;
        lines.push_back("witness: " + s);
    }

    void absorb(const Certificate& sub)
    {
        if (!sub.ok)
            ok = false;
        for (const auto& l : sub.lines)
            lines.push_back("  " + l);
    }

    std::string to_string() const
    {
        std::string s = (ok ? "[ok] " : "[FAIL] ") + title;
        for (const auto& l : lines)
            s += "\n  " + l;
        return s;
    }
};

} // namespace qfol
