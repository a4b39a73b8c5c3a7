#include "relcay/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

#include "relcay/errors.hpp"
#include "relcay/report.hpp"
#include "relcay/spec_file.hpp"

namespace relcay {

  namespace {

    std::string read_file(std::string const& path) {
      std::ifstream in(path, std::ios::binary);
      if (!in) {
        throw ValidationError("cannot read " + path);
      }
      std::ostringstream s;
      s << in.rdbuf();
      return s.str();
    }

    struct Loaded {
      SpecFile                    file;
      std::unique_ptr<GroupModel> model;
      std::unique_ptr<Subgroup>   subgroup;
      std::string                 hash;
    };

    Loaded load(std::string const& path, std::string const& subgroup_name, std::size_t budget,
                bool need_subgroup = true) {
      Loaded      l;
      std::string text = read_file(path);
      l.hash           = hex64(fnv1a64(text));
      l.file           = parse_spec(text);
      require_valid(l.file);
      if (!l.file.group) {
        throw ValidationError(path + " declares no group");
      }
      l.model = std::make_unique<GroupModel>(*l.file.group);
      if (!need_subgroup) {
        return l;
      }
      SubgroupSpec spec;
      if (subgroup_name == "1") {
        spec = trivial_subgroup_spec(*l.model);
      } else if (auto const* decl = l.file.subgroup(subgroup_name)) {
        spec = decl->spec;
      } else {
        throw ValidationError("no subgroup named '" + subgroup_name + "' in " + path);
      }
      l.subgroup = std::make_unique<Subgroup>(*l.model, spec, budget);
      return l;
    }

    struct BallSource {
      CosetBall   ball;
      std::string hash;
    };

    CosetBall ball_from_file_text(std::string const& text, std::string const& path) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(text);
      } catch (nlohmann::json::exception const& e) {
        throw ValidationError(path + ": " + e.what());
      }
      if (j.is_object() && j.contains("result")) {
        return ball_from_json(j["result"]);
      }
      return ball_from_json(j);
    }

    struct Common {
      std::string                  out_path;
      bool                         strict  = false;
      std::optional<std::uint64_t> seed;
      unsigned                     threads = 1;
      std::size_t                  budget  = kDefaultBudget;
    };

    void add_common(CLI::App* app, Common& c) {
      app->add_option("--out", c.out_path, "Write the report here instead of stdout");
      app->add_flag("--strict", c.strict, "Exit 4 when any result is uncertified");
      app->add_option("--seed", c.seed, "Seed for every random choice");
      app->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
      app->add_option("--budget", c.budget, "Enumeration budget (elements or cosets)")
          ->check(CLI::PositiveNumber);
    }

    class Runner {
     public:
      Runner(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
          : _args(args), _out(out), _err(err) {}

      int operator()();

     private:
      void emit(RunManifest& m, ordered_json result);
      int  finish(RunManifest const& m) const;
      void emit_error(char const* kind, std::string const& message,
                      ordered_json extra = ordered_json::object()) const;

      RunManifest manifest(std::string hash) const {
        RunManifest m;
        std::string cmd = "relcay";
        for (auto const& a : _args) {
          cmd += " " + a;
        }
        m.command   = cmd;
        m.spec_hash = std::move(hash);
        m.seed      = _common.seed;
        return m;
      }

      CosetBall obtain_ball(std::string& hash) {
        if (!_ball_path.empty()) {
          std::string text = read_file(_ball_path);
          hash             = hex64(fnv1a64(text));
          return ball_from_file_text(text, _ball_path);
        }
        if (_spec_path.empty() || !_radius) {
          throw ValidationError("give --ball FILE or --spec FILE with --radius R");
        }
        _loaded = load(_spec_path, _subgroup, _common.budget);
        hash    = _loaded.hash;
        return build_ball(*_loaded.subgroup, *_radius, _common.budget);
      }

      int cmd_check();
      int cmd_build();
      int cmd_delta();
      int cmd_qc();
      int cmd_constants();
      int cmd_walk();
      int cmd_embed();

      std::vector<std::string> const&    _args;
      std::ostream&                      _out;
      std::ostream&                      _err;
      std::chrono::steady_clock::time_point _start = std::chrono::steady_clock::now();

      Common                     _common;
      std::string                _spec_path, _ball_path, _subgroup = "1";
      std::optional<std::size_t> _radius;
      Loaded                     _loaded;

      // delta
      std::string  _delta_mode = "bigon";
      DeltaOptions _delta;
      // constants
      std::string _c_delta = "10", _c_E = "0", _c_K = "0";
      std::optional<std::string> _c_N;
      bool                       _compute_N = false;
      std::string                _consistency_ball;
      // walk
      std::string              _walk_mode = "exact";
      WalkConfig               _walk;
      std::vector<std::size_t> _radii;
      std::string              _csv_path;
      bool                     _force_float = false;
      // embed
      std::string _c_word, _h0_word;
      std::size_t _sanity_bound = 0;
    };

    void Runner::emit_error(char const* kind, std::string const& message,
                            ordered_json extra) const {
      ordered_json j;
      j["error"]   = kind;
      j["message"] = message;
      for (auto& [k, v] : extra.items()) {
        j[k] = v;
      }
      _err << j.dump() << '\n';
    }

    void Runner::emit(RunManifest& m, ordered_json result) {
      m.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now()
                                                                - _start)
                          .count();
      std::string text = envelope(m, std::move(result)).dump(2) + "\n";
      if (_common.out_path.empty()) {
        _out << text;
      } else {
        std::ofstream f(_common.out_path, std::ios::binary);
        if (!f) {
          throw ValidationError("cannot write " + _common.out_path);
        }
        f << text;
      }
    }

    int Runner::finish(RunManifest const& m) const {
      if (_common.strict && !m.all_certified()) {
        emit_error("Uncertified", "a result is uncertified or not exhaustive");
        return kExitUncertified;
      }
      return kExitOk;
    }

    int Runner::cmd_check() {
      std::string text = read_file(_spec_path);
      SpecFile    file = parse_spec(text);
      if (!file.ok()) {
        for (Diagnostic const& d : file.diagnostics) {
          emit_error("Diagnostic", d.message, {{"line", d.line}, {"column", d.column}});
        }
        return kExitValidation;
      }
      _out << normalized(file);
      return kExitOk;
    }

    int Runner::cmd_build() {
      if (!_radius) {
        throw ValidationError("build needs --radius");
      }
      _loaded         = load(_spec_path, _subgroup, _common.budget);
      CosetBall  ball = build_ball(*_loaded.subgroup, *_radius, _common.budget);
      RunManifest m   = manifest(_loaded.hash);
      m.certified["ball"] = ball.certified();
      emit(m, to_json(ball));
      return finish(m);
    }

    int Runner::cmd_delta() {
      std::string hash;
      CosetBall   ball = obtain_ball(hash);
      if (_common.seed) {
        _delta.seed = *_common.seed;
      }
      _delta.threads = _common.threads;
      RunManifest m  = manifest(hash);
      m.certified["ball"] = ball.certified();
      ordered_json result = ordered_json::object();
      auto one = [&](std::string const& name) {
        DeltaReport r;
        if (name == "bigon") {
          r = bigon_delta(ball, _delta);
        } else if (name == "trim") {
          r = trim_delta(ball, _delta);
        } else {
          r = four_point_delta(ball, _delta);
        }
        m.certified[name]  = r.certified;
        m.exhaustive[name] = r.exhaustive;
        result[name]       = to_json(r);
      };
      if (_delta_mode == "all") {
        for (char const* name : {"bigon", "trim", "four-point"}) {
          one(name);
        }
      } else {
        one(_delta_mode);
      }
      emit(m, std::move(result));
      return finish(m);
    }

    int Runner::cmd_qc() {
      if (!_radius) {
        throw ValidationError("qc needs --radius");
      }
      _loaded = load(_spec_path, _subgroup, _common.budget);
      auto E  = estimate_E(*_loaded.subgroup, *_radius, _common.budget);
      auto K  = estimate_K(*_loaded.subgroup, *_radius, _common.budget);
      RunManifest m    = manifest(_loaded.hash);
      m.certified["E"] = E.certified;
      m.certified["K"] = K.certified;
      Alphabet const& a = _loaded.model->alphabet();
      emit(m, {{"E", to_json(E, a)}, {"K", to_json(K, a)}});
      return finish(m);
    }

    mpz_class big(std::string const& text, char const* what) {
      mpz_class v;
      if (text.empty() || v.set_str(text, 10) != 0) {
        throw ValidationError(std::string(what) + " must be a decimal integer");
      }
      return v;
    }

    int Runner::cmd_constants() {
      mpz_class const delta = big(_c_delta, "--delta");
      mpz_class const E     = big(_c_E, "--E");
      mpz_class const K     = big(_c_K, "--K");
      if (delta < 0 || E < 0 || K < 0) {
        throw ValidationError("--delta, --E and --K must be nonnegative");
      }
      std::string  hash = "none";
      ordered_json result;
      GrowthCount  n{1, true, "given"};
      if (_compute_N) {
        if (_spec_path.empty()) {
          throw ValidationError("--compute-N needs --spec");
        }
        _loaded = load(_spec_path, _subgroup, _common.budget, false);
        hash    = _loaded.hash;
        // The count uses the clamped delta, matching the ladder.
        n = compute_N(*_loaded.model, delta < 10 ? mpz_class(10) : delta, E, K, _common.budget);
      } else if (_c_N) {
        n.N = big(*_c_N, "--N");
      }
      ConstantLadder l = ladder(LadderInput::make(delta, E, K, n.N, n.exact));
      RunManifest    m = manifest(hash);
      m.certified["N"] = n.exact;
      result           = to_json(l);
      result["N"]      = to_json(n);
      if (!_consistency_ball.empty()) {
        std::string text = read_file(_consistency_ball);
        CosetBall   ball = ball_from_file_text(text, _consistency_ball);
        DeltaReport r    = bigon_delta(ball, _delta);
        result["consistency"]          = to_json(ladder_consistency(l, r));
        result["consistency"]["bigon"] = to_json(r);
        m.certified["consistency"]     = r.certified;
      }
      emit(m, std::move(result));
      return finish(m);
    }

    int Runner::cmd_walk() {
      std::string hash;
      if (_walk_mode == "profile" && !_radius && _ball_path.empty() && !_radii.empty()) {
        _radius = *std::max_element(_radii.begin(), _radii.end());
      }
      CosetBall   ball = obtain_ball(hash);
      if (_common.seed) {
        _walk.seed = *_common.seed;
      }
      _walk.threads = _common.threads;
      SolveOptions opt;
      opt.force_float = _force_float;
      RunManifest m   = manifest(hash);
      m.certified["ball"] = ball.certified();
      ordered_json result;
      if (_walk_mode == "mc") {
        result = to_json(simulate(ball, _walk));
      } else if (_walk_mode == "exact") {
        result = to_json(escape_exact(ball, opt));
      } else if (_walk_mode == "resistance") {
        result = to_json(escape_and_resistance(ball, opt));
      } else {
        if (_radii.empty()) {
          throw ValidationError("profile mode needs --radii");
        }
        EscapeProfile p;
        for (std::size_t i = 0; i < _radii.size(); ++i) {
          std::size_t r = _radii[i];
          if (r < 1 || (i > 0 && r <= _radii[i - 1])) {
            throw ValidationError("radii must be increasing and positive");
          }
          if (r > ball.radius()) {
            throw BallTooSmall("radius " + std::to_string(r) + " exceeds the ball radius "
                               + std::to_string(ball.radius()));
          }
          CosetBall b = r == ball.radius() ? ball : ball.restrict(r);
          p.entries.push_back(escape_and_resistance(b, opt));
        }
        for (std::size_t i = 0; i < p.entries.size(); ++i) {
          p.identity = p.identity && p.entries[i].identity;
          if (i > 0) {
            auto const& a = p.entries[i - 1];
            auto const& b = p.entries[i];
            bool pm = a.exact && b.exact ? b.p_esc <= a.p_esc : b.p_value <= a.p_value + 1e-12L;
            bool rm = !(a.r_eff && b.r_eff) || *b.r_eff >= *a.r_eff;
            p.monotone = p.monotone && pm && rm;
          }
        }
        classify(p);
        result = to_json(p);
        if (!_csv_path.empty()) {
          std::ofstream f(_csv_path, std::ios::binary);
          if (!f) {
            throw ValidationError("cannot write " + _csv_path);
          }
          f << profile_csv(p);
        }
      }
      emit(m, std::move(result));
      return finish(m);
    }

    int Runner::cmd_embed() {
      if (!_radius) {
        throw ValidationError("embed needs --radius");
      }
      _loaded                 = load(_spec_path, _subgroup, _common.budget);
      Alphabet const&     a   = _loaded.model->alphabet();
      EmbeddingSpec const s   = make_embedding_spec(*_loaded.subgroup, parse_word(_c_word, a),
                                                    parse_word(_h0_word, a), _common.budget);
      EmbeddingReport const r = build_embedding(*_loaded.subgroup, s, *_radius, _common.budget);
      RunManifest           m = manifest(_loaded.hash);
      m.certified["membership"] = true;
      ordered_json result;
      result["spec"]     = to_json(s, a);
      result["sandwich"] = to_json(r);
      if (_sanity_bound > 0) {
        result["free_product_sanity"] = to_json(
            free_product_sanity(*_loaded.subgroup, s.c, _sanity_bound, _common.budget), a);
      }
      emit(m, std::move(result));
      return finish(m);
    }

    int Runner::operator()() {
      CLI::App app{"Relative Cayley graph toolkit", "relcay"};
      app.require_subcommand(1);
      app.set_version_flag("--version", std::string(kVersion));

      auto* check = app.add_subcommand("check", "Validate a spec file and print it normalized");
      check->add_option("--spec", _spec_path)->required();

      auto* build = app.add_subcommand("build", "Build a coset ball and write it as JSON");
      build->add_option("--spec", _spec_path)->required();
      build->add_option("--subgroup", _subgroup, "Subgroup name, or 1 for the trivial one");
      build->add_option("--radius", _radius)->required();

      auto* delta = app.add_subcommand("delta", "Measure thin-bigon, trim or four-point delta");
      delta->add_option("--ball", _ball_path);
      delta->add_option("--spec", _spec_path);
      delta->add_option("--subgroup", _subgroup);
      delta->add_option("--radius", _radius);
      delta->add_option("--mode", _delta_mode)
          ->check(CLI::IsMember({"bigon", "trim", "four-point", "all"}));
      delta->add_flag("--near-geodesic", _delta.near_geodesic);
      delta->add_option("--exhaustive-limit", _delta.exhaustive_limit);
      delta->add_option("--samples", _delta.samples);

      auto* qc = app.add_subcommand("qc", "Estimate the quasiconvexity constants E and K");
      qc->add_option("--spec", _spec_path)->required();
      qc->add_option("--subgroup", _subgroup)->required();
      qc->add_option("--radius", _radius)->required();

      auto* constants = app.add_subcommand("constants", "Evaluate the constant ladder");
      constants->add_option("--delta", _c_delta);
      constants->add_option("--E", _c_E);
      constants->add_option("--K", _c_K);
      auto* n_opt = constants->add_option("--N", _c_N);
      constants->add_flag("--compute-N", _compute_N)->excludes(n_opt);
      constants->add_option("--spec", _spec_path);
      constants->add_option("--consistency", _consistency_ball,
                            "Ball file whose bigon delta is compared with delta'");

      auto* walk = app.add_subcommand("walk", "Random walk escape and resistance");
      walk->add_option("--ball", _ball_path);
      walk->add_option("--spec", _spec_path);
      walk->add_option("--subgroup", _subgroup);
      walk->add_option("--radius", _radius);
      walk->add_option("--mode", _walk_mode)
          ->check(CLI::IsMember({"mc", "exact", "resistance", "profile"}));
      walk->add_option("--steps", _walk.steps)->check(CLI::PositiveNumber);
      walk->add_option("--trials", _walk.trials)->check(CLI::PositiveNumber);
      walk->add_option("--radii", _radii)->delimiter(',');
      walk->add_option("--csv", _csv_path, "Also write the profile as CSV");
      walk->add_flag("--float", _force_float, "Skip the exact rational solve");

      auto* embed = app.add_subcommand("embed", "Check the free-group embedding sandwich");
      embed->add_option("--spec", _spec_path)->required();
      embed->add_option("--subgroup", _subgroup)->required();
      embed->add_option("--c", _c_word)->required();
      embed->add_option("--h0", _h0_word)->required();
      embed->add_option("--radius", _radius)->required();
      embed->add_option("--sanity-bound", _sanity_bound,
                        "Also run the free product check up to this length");

      for (auto* sub : {check, build, delta, qc, constants, walk, embed}) {
        add_common(sub, _common);
      }

      std::vector<std::string> reversed(_args.rbegin(), _args.rend());
      try {
        app.parse(reversed);
      } catch (CLI::CallForHelp const&) {
        _out << app.help();
        return kExitOk;
      } catch (CLI::CallForAllHelp const&) {
        _out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
      } catch (CLI::CallForVersion const&) {
        _out << kVersion << '\n';
        return kExitOk;
      } catch (CLI::ParseError const& e) {
        emit_error("UsageError", e.what());
        return kExitValidation;
      }

      if (_common.strict && !_common.seed) {
        emit_error("ValidationError", "--strict requires --seed");
        return kExitValidation;
      }
      try {
        if (check->parsed()) {
          return cmd_check();
        }
        if (build->parsed()) {
          return cmd_build();
        }
        if (delta->parsed()) {
          return cmd_delta();
        }
        if (qc->parsed()) {
          return cmd_qc();
        }
        if (constants->parsed()) {
          return cmd_constants();
        }
        if (walk->parsed()) {
          return cmd_walk();
        }
        return cmd_embed();
      } catch (ParseError const& e) {
        emit_error(e.kind(), e.what(), {{"line", e.line()}, {"column", e.column()}});
        return kExitValidation;
      } catch (ValidationError const& e) {
        emit_error(e.kind(), e.what());
        return kExitValidation;
      } catch (BallExhausted const& e) {
        emit_error(e.kind(), e.what());
        return kExitBudget;
      } catch (Error const& e) {
        emit_error(e.kind(), e.what());
        return kExitFailure;
      } catch (std::exception const& e) {
        emit_error("InternalError", e.what());
        return kExitFailure;
      }
    }

  }  // namespace

  int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
    return Runner(args, out, err)();
  }

  int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
  }

}  // namespace relcay
