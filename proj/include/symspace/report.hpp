#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace symspace {

enum class Status { pass, fail, info };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::info: return "info";
    }
    return "?";
}

struct Check {
    std::string name;
    Status status = Status::info;
    nlohmann::json observed;
    nlohmann::json expected;
    double tol = 0.0;
    std::string anchor;
};

class Report {
public:
    Report() = default;
    explicit Report(std::string suite) : suite_(std::move(suite)) {}

    const std::string& suite() const { return suite_; }
    const std::vector<Check>& checks() const { return checks_; }

    void add(Check c) { checks_.push_back(std::move(c)); }

    // pass iff 0 <= residual <= tol; NaN fails.
    Check& residual(std::string name, double residual, double tol, std::string anchor) {
        const bool ok = std::isfinite(residual) && residual <= tol;
        checks_.push_back({std::move(name), ok ? Status::pass : Status::fail, residual, 0.0, tol, std::move(anchor)});
        return checks_.back();
    }

    Check& near(std::string name, double observed, double expected, double tol, std::string anchor) {
        const bool ok = std::isfinite(observed) && std::abs(observed - expected) <= tol;
        checks_.push_back({std::move(name), ok ? Status::pass : Status::fail, observed, expected, tol, std::move(anchor)});
        return checks_.back();
    }

    template <class T>
    Check& equal(std::string name, const T& observed, const T& expected, std::string anchor) {
        checks_.push_back({std::move(name), observed == expected ? Status::pass : Status::fail, observed, expected, 0.0,
                           std::move(anchor)});
        return checks_.back();
    }

    Check& truth(std::string name, bool observed, std::string anchor) { return equal(std::move(name), observed, true, std::move(anchor)); }

    Check& info(std::string name, nlohmann::json observed, std::string anchor) {
        checks_.push_back({std::move(name), Status::info, std::move(observed), nullptr, 0.0, std::move(anchor)});
        return checks_.back();
    }

    // A control passes when the wrapped check fails.
    Check& expect_failure(std::string name, const Check& inner, std::string anchor) {
        Check c = inner;
        c.name = std::move(name);
        c.anchor = std::move(anchor);
        c.status = inner.status == Status::fail ? Status::pass : Status::fail;
        c.expected = "fail";
        checks_.push_back(std::move(c));
        return checks_.back();
    }

    void merge(const Report& other, const std::string& prefix = {}) {
        for (Check c : other.checks_) {
            c.name = prefix + c.name;
            checks_.push_back(std::move(c));
        }
    }

    const Check* find(const std::string& name) const {
        for (const Check& c : checks_)
            if (c.name == name) return &c;
        return nullptr;
    }

    int count(Status s) const {
        return static_cast<int>(std::count_if(checks_.begin(), checks_.end(), [s](const Check& c) { return c.status == s; }));
    }

    bool passed() const { return count(Status::fail) == 0; }

    void sort_by_name() {
        std::stable_sort(checks_.begin(), checks_.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
    }

private:
    std::string suite_;
    std::vector<Check> checks_;
};

}  // namespace symspace
