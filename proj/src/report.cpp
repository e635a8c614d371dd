#include "tg/report.hpp"

namespace tg {

const char* status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::violated_claim: return "violated-claim";
    }
    return "fail";
}

void Report::add(std::string name, Status s, double margin, std::string detail) {
    items.push_back({std::move(name), s, margin + 0.0, std::move(detail)});  // + 0.0 drops a negative zero
}

void Report::append(const Report& other) {
    for (const auto& it : other.items) {
        CheckItem c = it;
        if (!other.suite.empty()) c.name = other.suite + "." + c.name;
        items.push_back(std::move(c));
    }
}

bool Report::all_pass() const { return count(Status::fail) == 0; }
bool Report::any_violation() const { return count(Status::violated_claim) != 0; }

std::size_t Report::count(Status s) const {
    std::size_t n = 0;
    for (const auto& it : items)
        if (it.status == s) ++n;
    return n;
}

}  // namespace tg
