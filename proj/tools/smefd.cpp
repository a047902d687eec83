#include "smefd/approximation.hpp"
#include "smefd/config.hpp"
#include "smefd/errors.hpp"
#include "smefd/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

int main(int argc, char **argv)
{
	CLI::App app{"Set-membership fault diagnosis for a three-thruster surface vessel"};
	app.require_subcommand(1);
	app.fallthrough();

	std::optional<std::uint64_t> seed;
	std::string out_dir;
	std::optional<std::size_t> vertex_every;
	app.add_option("--seed", seed, "Override the config seed");
	app.add_option("--out-dir", out_dir, "Override the output directory");
	app.add_option("--log-vertices-every", vertex_every, "Vertex snapshot cadence in steps (0 disables)");

	std::string config_path;
	bool deterministic = false;
	auto *run = app.add_subcommand("run", "Simulate one scenario and write its logs");
	run->add_option("config", config_path, "Scenario config (JSON, comments allowed)")->required()->check(CLI::ExistingFile);
	run->add_flag("--deterministic", deterministic, "Log step times as zero for byte-identical reruns");

	std::vector<std::string> variants{"baseline"};
	std::size_t seeds = 1;
	auto *compare = app.add_subcommand("compare", "Run matched-seed variants and tabulate them");
	compare->add_option("config", config_path, "Scenario config")->required()->check(CLI::ExistingFile);
	compare->add_option("--variants", variants,
			    "baseline, noise_blind, phi=N, lambda_bar=0, dither=0")->expected(1, -1);
	compare->add_option("--seeds", seeds, "Number of consecutive seeds")->check(CLI::PositiveNumber);
	bool per_run = false;
	compare->add_flag("--per-run", per_run, "Print one row per variant and seed instead of the summary");

	std::size_t p = 3;
	unsigned phi = 1;
	std::string directions_out;
	auto *dirs = app.add_subcommand("directions", "Generate an outer-approximation direction set");
	dirs->add_option("--p", p, "Parameter dimension")->check(CLI::PositiveNumber);
	dirs->add_option("--phi", phi, "Accuracy level");
	dirs->add_option("--out", directions_out, "Output file (stdout if omitted)");

	CLI11_PARSE(app, argc, argv);

	try {
		if (dirs->parsed()) {
			const smefd::DirectionSet set = smefd::generate_directions(p, phi);

			if (directions_out.empty()) {
				smefd::write_directions(std::cout, set);

			} else {
				std::ofstream f(directions_out);

				if (!f) {
					throw smefd::Error("cannot write " + directions_out);
				}

				smefd::write_directions(f, set);
			}

			std::cerr << set.size() << " directions\n";
			return 0;
		}

		smefd::ScenarioConfig cfg = smefd::load_config(config_path);

		if (seed) {
			cfg.seed = *seed;
		}

		if (!out_dir.empty()) {
			cfg.out_dir = out_dir;
		}

		if (vertex_every) {
			cfg.vertex_every = *vertex_every;
		}

		if (run->parsed()) {
			cfg.deterministic = cfg.deterministic || deterministic;
			const smefd::RunLog log = smefd::run_scenario(cfg);
			smefd::write_run(cfg.out_dir, log, cfg);
			smefd::write_summary_json(std::cout, log, cfg);
			return 0;
		}

		const auto table = smefd::compare_variants(cfg, variants, seeds);
		if (per_run) {
			smefd::write_outcomes(std::cout, table);

		} else {
			smefd::write_comparison(std::cout, table);
		}

		return 0;

	} catch (const smefd::Error &e) {
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	}
}
