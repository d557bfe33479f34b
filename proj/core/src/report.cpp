#include "ctpair/report.hpp"

#include <json.hpp>

namespace ctpair {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::not_applicable: return "NOT-APPLICABLE";
  }
  return "?";
}

void Report::add(std::string name, Verdict v, std::string detail, bool required) {
  items.push_back(CheckItem{std::move(name), v, std::move(detail), required});
}

void Report::pass(std::string name, std::string detail) {
  add(std::move(name), Verdict::pass, std::move(detail));
}

void Report::fail_item(std::string name, std::string detail) {
  add(std::move(name), Verdict::fail, std::move(detail));
}

bool Report::all_required_pass() const {
  for (const auto& it : items)
    if (it.required && it.verdict == Verdict::fail) return false;
  return true;
}

std::string Report::to_text() const {
  std::string out = title + "\n";
  for (const auto& it : items) {
    out += "  [";
    out += verdict_name(it.verdict);
    out += "] ";
    out += it.name;
    if (!it.required) out += " (informational)";
    if (!it.detail.empty()) out += " -- " + it.detail;
    out += "\n";
  }
  return out;
}

std::string Report::to_json_string() const {
  nlohmann::ordered_json j;
  j["title"] = title;
  j["ok"] = all_required_pass();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& it : items) {
    nlohmann::ordered_json c;
    c["name"] = it.name;
    c["verdict"] = verdict_name(it.verdict);
    c["required"] = it.required;
    if (!it.detail.empty()) c["detail"] = it.detail;
    j["checks"].push_back(std::move(c));
  }
  return j.dump(2);
}

} // namespace ctpair
