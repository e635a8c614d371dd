#pragma once

#include <string>
#include <vector>

namespace tg {

enum class Status { pass, fail, violated_claim };

const char* status_name(Status s);

struct CheckItem {
    std::string name;
    Status status = Status::pass;
    double margin = 0.0;  // positive means satisfied with room to spare
    std::string detail;
};

struct Report {
    std::string suite;
    std::vector<CheckItem> items;

    void add(std::string name, Status s, double margin, std::string detail = {});
    void add(std::string name, bool ok, double margin, std::string detail = {}) {
        add(std::move(name), ok ? Status::pass : Status::fail, margin, std::move(detail));
    }
    void append(const Report& other);
    bool all_pass() const;  // no item has status fail
    bool any_violation() const;
    std::size_t count(Status s) const;
};

}  // namespace tg
