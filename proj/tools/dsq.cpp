/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

// dsq: command-line front end for the question topic pipeline.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsq/pipeline.hpp"

namespace {

struct Overrides {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::string> out, seed, n_topics, max_iter, tol, sizes, format, threads;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Config file");
  cmd->add_option("--set", o.sets, "Override a config key, e.g. --set corex.tol=1e-6");
  cmd->add_option("--out", o.out, "Output directory (output.dir)");
  cmd->add_option("--seed", o.seed, "Random seed (corex.seed)");
  cmd->add_option("--n-topics", o.n_topics, "Number of topics (corex.n_topics)");
  cmd->add_option("--max-iter", o.max_iter, "Iteration cap (corex.max_iter)");
  cmd->add_option("--tol", o.tol, "Objective tolerance (corex.tol)");
  cmd->add_option("--threads", o.threads, "E-step worker threads (corex.threads)");
  cmd->add_option("--sizes", o.sizes, "Sweep sizes, comma separated (sweep.sizes)");
  cmd->add_option("--format", o.format, "Report format: csv or text (reports.format)");
}

dsq::PipelineConfig build_config(const Overrides& o) {
  dsq::ConfigStore store;
  if (!o.config.empty()) store.load_file(o.config);
  store.apply_env();
  for (const auto& s : o.sets) store.set_assignment(s);
  auto put = [&](const char* key, const std::optional<std::string>& v) {
    if (v) store.set(key, *v);
  };
  put("output.dir", o.out);
  put("corex.seed", o.seed);
  put("corex.n_topics", o.n_topics);
  put("corex.max_iter", o.max_iter);
  put("corex.tol", o.tol);
  put("corex.threads", o.threads);
  put("sweep.sizes", o.sizes);
  put("reports.format", o.format);
  return store.resolve();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic mining for consumer dietary supplement questions"};
  app.require_subcommand(1);
  Overrides o;

  std::string selected;
  for (const auto& name : dsq::stage_names()) {
    auto* cmd = app.add_subcommand(name, "Run the " + name + " stage");
    add_common(cmd, o);
    cmd->callback([&selected, name] { selected = name; });
  }
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage in order");
  add_common(pipeline, o);
  pipeline->callback([&selected] { selected = "pipeline"; });

  auto* taxonomy = app.add_subcommand("taxonomy", "Taxonomy utilities");
  taxonomy->require_subcommand(1);
  auto* validate = taxonomy->add_subcommand("validate", "Check a taxonomy file and print its cardinality");
  std::string taxonomy_path;
  size_t taxonomy_topics = 200;
  validate->add_option("path", taxonomy_path, "Taxonomy file")->required();
  validate->add_option("--n-topics", taxonomy_topics, "Number of model topics");
  validate->callback([&selected] { selected = "taxonomy-validate"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    std::cerr << "error kind=usage message=" << msg << "\n";
    return dsq::kExitValidation;
  }

  try {
    if (selected == "taxonomy-validate") {
      const auto tax = dsq::load_taxonomy(taxonomy_path, taxonomy_topics);
      const auto c = dsq::cardinality(tax);
      std::cout << "categories=" << c.categories << " groups=" << c.groups << " mapped_topics=" << c.mapped_topics
                << " unassigned_topics=" << c.unassigned_topics << "\n";
      return dsq::kExitOk;
    }
    const auto cfg = build_config(o);
    if (selected == "pipeline") {
      dsq::run_pipeline(cfg, [](const dsq::StageResult& r) { std::cout << r.summary << "\n" << std::flush; });
    } else {
      std::cout << dsq::run_stage(selected, cfg).summary << "\n";
    }
    return dsq::kExitOk;
  } catch (const std::exception& e) {
    const auto f = dsq::describe_failure(e);
    std::cerr << f.line << "\n";
    return f.code;
  }
}
