#pragma once

#include "ruthkit/examples.hpp"
#include "ruthkit/hpt.hpp"
#include "ruthkit/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#ifndef RUTHKIT_FIXTURES
#define RUTHKIT_FIXTURES "fixtures"
#endif

namespace testing_support {

using namespace ruthkit;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture(const std::string& name) { return std::string(RUTHKIT_FIXTURES) + "/" + name; }

inline Model load_fixture(const std::string& name) { return parse_model_text(read_file(fixture(name))); }

/// Random form with entries on every mask of the given rank.
inline Form random_form(AlgebraPtr alg, int rank, const std::vector<int>& rows, const std::vector<int>& cols, Rng& rng,
                        double density = 0.3) {
  Form f = make_form(alg, rank, rows, cols);
  std::bernoulli_distribution pick(density);
  for (unsigned m = 0; m < (1u << rank); ++m)
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (pick(rng)) add_entry(f, m, static_cast<int>(i), static_cast<int>(j), random_element(*alg, rng, 0.6));
  compact(f);
  return f;
}

/// A nonzero homogeneous piece of a random End-valued form, with its total degree.
inline std::pair<Form, int> random_homogeneous(AlgebraPtr alg, int rank, const std::vector<int>& grading, Rng& rng) {
  for (;;) {
    Form f = random_form(alg, rank, grading, grading, rng, 0.25);
    auto parts = split_total_degree(f);
    if (parts.empty()) continue;
    auto it = parts.begin();
    std::advance(it, std::uniform_int_distribution<int>(0, static_cast<int>(parts.size()) - 1)(rng));
    return {it->second, it->first};
  }
}

inline Form from_entries(const Form& shape, const std::map<std::tuple<unsigned, int, int>, VecQ>& e, int rank) {
  Form f = make_form(shape.alg, rank, shape.rows, shape.cols);
  for (const auto& [key, v] : e) add_entry(f, std::get<0>(key), std::get<1>(key), std::get<2>(key), v);
  compact(f);
  return f;
}

struct CommandResult {
  int status = -1;
  std::string out;
};

/// Runs a shell command, capturing stdout.
inline CommandResult run(const std::string& cmd) {
  CommandResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace testing_support
