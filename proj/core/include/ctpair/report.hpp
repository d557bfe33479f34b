#pragma once

#include <string>
#include <vector>

namespace ctpair {

enum class Verdict { pass, fail, not_applicable };

const char* verdict_name(Verdict v);

struct CheckItem {
  std::string name;
  Verdict verdict = Verdict::pass;
  std::string detail;   // witness or explanation on failure
  bool required = true; // informational checks do not gate exit codes
};

struct Report {
  std::string title;
  std::vector<CheckItem> items;

  void add(std::string name, Verdict v, std::string detail = "", bool required = true);
  void pass(std::string name, std::string detail = "");
  void fail_item(std::string name, std::string detail);
  bool all_required_pass() const;
  std::string to_text() const;
  std::string to_json_string() const; // stable field order
};

} // namespace ctpair
