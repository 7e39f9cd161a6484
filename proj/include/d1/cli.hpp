#pragma once

// The d1 command-line front end. Every subcommand reads and writes envelope
// JSON; `-` stands for stdin/stdout. Exit codes: 0 success, 1 mathematical
// failure (identity false, no inverse found, suite failures), 2 usage error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "d1/experiments.hpp"
#include "d1/serialize.hpp"

namespace d1::cli {

inline constexpr int kOk = 0;
inline constexpr int kMathFailure = 1;
inline constexpr int kUsage = 2;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

using io::Json;

inline std::string read_source(const std::string& path, Streams& s) {
  if (path == "-") return {std::istreambuf_iterator<char>(s.in), std::istreambuf_iterator<char>()};
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void write_sink(const std::string& path, const std::string& text, Streams& s) {
  if (path == "-") {
    s.out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

struct Input {
  std::string source;
  io::Envelope env;
};

inline Input load(const std::string& path, Streams& s) {
  try {
    return {path, io::parse_envelope(read_source(path, s))};
  } catch (const UsageError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

template <Field F>
Algebra<F> algebra_of(const F& f, const io::Header& h) {
  return {f, h.group, h.n};
}

// Decodes, then warns when re-encoding does not reproduce the payload.
template <class Decode, class Encode>
auto decode(const Input& in, const std::string& type, Streams& s, Decode&& dec, Encode&& enc) {
  try {
    io::expect_type(in.env.header, type);
    auto value = dec(in.env.payload);
    if (enc(value) != in.env.payload)
      s.err << "warning: " << in.source << ": payload was not in canonical form and has been canonicalized\n";
    return value;
  } catch (const UsageError& e) {
    throw UsageError(in.source + ": " + e.what());
  }
}

template <Field F>
TwistedElement<F> twisted(const F& f, const Input& in, Streams& s) {
  auto alg = algebra_of(f, in.env.header);
  return decode(
      in, "twisted", s, [&](const Json& j) { return io::twisted_from_json(alg, j); },
      [](const auto& x) { return io::twisted_to_json(x); });
}

template <Field F>
GroupRingElement<F> ring(const F& f, const Input& in, Streams& s) {
  auto alg = algebra_of(f, in.env.header);
  return decode(
      in, "group_ring", s, [&](const Json& j) { return io::ring_from_json(alg, j); },
      [](const auto& x) { return io::ring_to_json(x); });
}

template <Field F>
TwistedMatrix<F> twisted_matrix(const F& f, const Input& in, Streams& s) {
  auto alg = algebra_of(f, in.env.header);
  return decode(
      in, "twisted_matrix", s, [&](const Json& j) { return io::twisted_matrix_from_json(alg, j); },
      [](const auto& x) { return io::twisted_matrix_to_json(x); });
}

template <Field F>
Configuration<F> configuration(const F& f, const Input& in, Streams& s) {
  auto alg = algebra_of(f, in.env.header);
  return decode(
      in, "configuration", s, [&](const Json& j) { return io::configuration_from_json(alg, j); },
      [](const auto& x) { return io::configuration_to_json(x); });
}

inline FiniteSubset subset(const Input& in, Streams& s) {
  const auto group = in.env.header.group;
  return decode(
      in, "subset", s, [&](const Json& j) { return io::subset_from_json(j, group); },
      [](const auto& x) { return io::subset_to_json(x); });
}

inline void require_compatible(const Input& a, const Input& b) {
  const auto& x = a.env.header;
  const auto& y = b.env.header;
  if (!(x.group == y.group)) throw UsageError("inputs use different groups (" + x.group.to_string() + ", " + y.group.to_string() + ")");
  if (!(x.field == y.field)) throw UsageError("inputs use different fields (" + x.field.to_string() + ", " + y.field.to_string() + ")");
  if (x.n != y.n) throw UsageError("shape mismatch: inputs have n = " + std::to_string(x.n) + " and n = " + std::to_string(y.n));
  if (x.type != y.type) throw UsageError("inputs have different payload types ('" + x.type + "', '" + y.type + "')");
}

inline std::string render(const io::Header& h, Json payload) { return io::serialize_envelope({h, std::move(payload)}); }

template <Field F>
std::string render(const Algebra<F>& alg, const std::string& type, Json payload) {
  return render(io::header_for(alg, type), std::move(payload));
}

inline io::Header with_type(io::Header h, std::string type) {
  h.type = std::move(type);
  return h;
}

enum class BinaryOp { Mul, Add };

// mul / add on group ring elements, twisted elements or twisted matrices.
template <Field F>
std::string binary(const F& f, BinaryOp op, const Input& a, const Input& b, Streams& s) {
  require_compatible(a, b);
  const auto& h = a.env.header;
  const auto& type = h.type;
  auto combine = [&](const auto& x, const auto& y) { return op == BinaryOp::Mul ? x * y : x + y; };
  if (type == "twisted") return render(h, io::twisted_to_json(combine(twisted(f, a, s), twisted(f, b, s))));
  if (type == "group_ring") return render(h, io::ring_to_json(combine(ring(f, a, s), ring(f, b, s))));
  if (type == "twisted_matrix")
    return render(h, io::twisted_matrix_to_json(combine(twisted_matrix(f, a, s), twisted_matrix(f, b, s))));
  throw UsageError("cannot combine payloads of type '" + type + "'");
}

template <Field F>
std::string canonicalize(const F& f, const Input& in, Streams& s) {
  const auto& h = in.env.header;
  if (h.type == "twisted") return render(h, io::twisted_to_json(twisted(f, in, s)));
  if (h.type == "group_ring") return render(h, io::ring_to_json(ring(f, in, s)));
  if (h.type == "twisted_matrix") return render(h, io::twisted_matrix_to_json(twisted_matrix(f, in, s)));
  if (h.type == "configuration") return render(h, io::configuration_to_json(configuration(f, in, s)));
  if (h.type == "subset") return render(h, io::subset_to_json(subset(in, s)));
  throw UsageError("fmt: payload type '" + h.type + "' has no canonical form");
}

inline Side parse_side(const std::string& text) {
  if (text == "left") return Side::Left;
  if (text == "right") return Side::Right;
  throw UsageError("--side must be 'left' or 'right'");
}

}  // namespace detail

/// Runs the command line; returns the process exit code.
inline int run(const std::vector<std::string>& args, Streams s) {
  using detail::Input;
  using detail::load;
  using io::Json;

  CLI::App app{"Linear non-uniform cellular automata and the twisted group ring D^1(k[G])", "d1"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::string out_path = "-";
  std::string a_path, b_path, t_path, x_path, set_path, input_path, second_path;
  std::string side = "left";
  int max_radius = 3, depth = 3, window = 3, max_steps = -1;
  bool inverse_shuffle = false;

  auto add_out = [&](CLI::App* c) { c->add_option("-o,--output", out_path, "Output file, '-' for stdout"); };

  auto* mul = app.add_subcommand("mul", "Product of two elements (group ring, twisted or twisted matrix)");
  mul->add_option("-a", a_path, "Left factor")->required();
  mul->add_option("-b", b_path, "Right factor")->required();
  add_out(mul);

  auto* add = app.add_subcommand("add", "Sum of two elements");
  add->add_option("-a", a_path, "First summand")->required();
  add->add_option("-b", b_path, "Second summand")->required();
  add_out(add);

  auto* embed_cmd = app.add_subcommand("embed", "Group ring element alpha to the twisted element (alpha, 0)");
  embed_cmd->add_option("input", input_path, "group_ring envelope")->required();
  add_out(embed_cmd);

  auto* shuffle = app.add_subcommand("f-shuffle", "D^1(M_n(k)[G]) to M_n(D^1(k[G])), or back with --inverse");
  shuffle->add_option("input", input_path, "twisted (or twisted_matrix with --inverse) envelope")->required();
  shuffle->add_flag("--inverse", inverse_shuffle, "Map a twisted matrix back to a twisted element");
  add_out(shuffle);

  auto* apply_cmd = app.add_subcommand("apply", "Apply the automaton of a twisted element to a configuration");
  apply_cmd->add_option("-t", t_path, "twisted envelope")->required();
  apply_cmd->add_option("-x", x_path, "configuration envelope")->required();
  add_out(apply_cmd);

  auto* compose_cmd = app.add_subcommand("compose", "Composition of automata a o b");
  compose_cmd->add_option("-a", a_path, "Outer automaton")->required();
  compose_cmd->add_option("-b", b_path, "Inner automaton")->required();
  add_out(compose_cmd);

  auto* local = app.add_subcommand("local-map", "Induced local map on a finite set E");
  local->add_option("-t", t_path, "twisted envelope")->required();
  local->add_option("--set", set_path, "subset envelope for E")->required();
  add_out(local);

  auto* invert = app.add_subcommand("invert", "Search for a one-sided inverse over growing balls");
  invert->add_option("input", input_path, "twisted envelope")->required();
  invert->add_option("--side", side, "left or right")->capture_default_str();
  invert->add_option("--max-radius", max_radius, "Largest ball radius tried")->capture_default_str()->check(CLI::NonNegativeNumber);
  add_out(invert);

  auto* tower = app.add_subcommand("kernel-tower", "Kernel tower over centered boxes (Z^d only)");
  tower->add_option("input", input_path, "twisted envelope")->required();
  tower->add_option("--depth", depth, "Largest level")->capture_default_str()->check(CLI::NonNegativeNumber);
  tower->add_option("--window", window, "Unchanged steps required for stability")->capture_default_str()->check(CLI::PositiveNumber);
  tower->add_option("--max-steps", max_steps, "Projection steps per level (default 4*window+8)");
  add_out(tower);

  auto* verdict = app.add_subcommand("verdict", "Stable-injectivity verdict within a budget");
  verdict->add_option("input", input_path, "twisted envelope")->required();
  verdict->add_option("--max-radius", max_radius, "Inverse and kernel search radius")->capture_default_str()->check(CLI::NonNegativeNumber);
  verdict->add_option("--depth", depth, "Kernel tower depth")->capture_default_str()->check(CLI::NonNegativeNumber);
  verdict->add_option("--window", window, "Kernel tower window")->capture_default_str()->check(CLI::PositiveNumber);
  add_out(verdict);

  auto* fmt = app.add_subcommand("fmt", "Rewrite an envelope in canonical form");
  fmt->add_option("input", input_path, "Envelope")->required();
  add_out(fmt);

  auto* verify = app.add_subcommand("verify-identity", "Exit 0 iff u * v is the identity");
  verify->add_option("u", input_path, "twisted envelope")->required();
  verify->add_option("v", second_path, "twisted envelope")->required();
  add_out(verify);

  SuiteConfig suite;
  std::string group_text = "Zd:1", field_text = "Fp:2";
  bool no_controls = false, omit_timing = false;
  auto* experiment = app.add_subcommand("experiment", "Seeded randomized suites");
  experiment->require_subcommand(1);
  auto add_suite_flags = [&](CLI::App* c) {
    c->add_option("--group", group_text, "Zd:<d> or free:<r>")->capture_default_str();
    c->add_option("--field", field_text, "Fp:<p> or Q")->capture_default_str();
    c->add_option("--n", suite.n, "Matrix size")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--seed", suite.seed, "Suite seed")->capture_default_str();
    c->add_option("--trials", suite.trials, "Random trials")->capture_default_str();
    c->add_option("--radius", suite.support_radius, "Support radius of generators")->capture_default_str();
    c->add_option("--max-word", suite.max_word, "Generator factors per unit")->capture_default_str();
    c->add_option("--max-radius", suite.budget.max_radius, "Inverse search radius")->capture_default_str();
    c->add_option("--depth", suite.budget.depth, "Kernel tower depth")->capture_default_str();
    c->add_option("--window", suite.budget.window, "Kernel tower window")->capture_default_str();
    c->add_flag("--omit-timing", omit_timing, "Leave wall-clock time out of the report");
    add_out(c);
  };
  auto* direct = experiment->add_subcommand("direct-finiteness", "u v = 1 implies v u = 1 on random units");
  add_suite_flags(direct);
  direct->add_flag("--rediscover", suite.rediscover, "Re-solve the right inverse instead of using the known one");
  auto* pipeline = experiment->add_subcommand("pipeline", "Left inverse by search must be a right inverse");
  add_suite_flags(pipeline);
  pipeline->add_flag("--no-controls", no_controls, "Skip the fixed identity, unipotent and decoy trials");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    s.out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    s.out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    s.err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (mul->parsed() || add->parsed()) {
      auto a = load(a_path, s), b = load(b_path, s);
      auto op = mul->parsed() ? detail::BinaryOp::Mul : detail::BinaryOp::Add;
      auto text = with_field(a.env.header.field, [&](const auto& f) { return detail::binary(f, op, a, b, s); });
      detail::write_sink(out_path, text, s);
      return kOk;
    }
    if (compose_cmd->parsed()) {
      auto a = load(a_path, s), b = load(b_path, s);
      detail::require_compatible(a, b);
      auto text = with_field(a.env.header.field, [&](const auto& f) {
        auto t = compose(Nuca(detail::twisted(f, a, s)), Nuca(detail::twisted(f, b, s)));
        return detail::render(a.env.header, io::twisted_to_json(t.omega()));
      });
      detail::write_sink(out_path, text, s);
      return kOk;
    }
    if (embed_cmd->parsed()) {
      auto in = load(input_path, s);
      auto text = with_field(in.env.header.field, [&](const auto& f) {
        return detail::render(detail::with_type(in.env.header, "twisted"), io::twisted_to_json(embed(detail::ring(f, in, s))));
      });
      detail::write_sink(out_path, text, s);
      return kOk;
    }
    if (shuffle->parsed()) {
      auto in = load(input_path, s);
      auto text = with_field(in.env.header.field, [&](const auto& f) {
        if (inverse_shuffle)
          return detail::render(detail::with_type(in.env.header, "twisted"),
                                io::twisted_to_json(f_unshuffle(detail::twisted_matrix(f, in, s))));
        return detail::render(detail::with_type(in.env.header, "twisted_matrix"),
                              io::twisted_matrix_to_json(f_shuffle(detail::twisted(f, in, s))));
      });
      detail::write_sink(out_path, text, s);
      return kOk;
    }
    if (apply_cmd->parsed()) {
      auto t = load(t_path, s), x = load(x_path, s);
      auto text = with_field(t.env.header.field, [&](const auto& f) {
        auto omega = detail::twisted(f, t, s);
        auto conf = detail::configuration(f, x, s);
        if (!(conf.algebra() == omega.algebra()))
          throw UsageError("shape mismatch: automaton and configuration use different group, field or n");
        return detail::render(detail::with_type(t.env.header, "configuration"),
                              io::configuration_to_json(apply(Nuca(omega), conf)));
      });
      detail::write_sink(out_path, text, s);
      return kOk;
    }
    if (local->parsed()) {
      auto t = load(t_path, s), e = load(set_path, s);
      if (!(t.env.header.group == e.env.header.group)) throw UsageError("--set uses a different group");
      auto text = with_field(t.env.header.field, [&](const auto& f) {
        auto m = induced_local_map(Nuca(detail::twisted(f, t, s)), detail::subset(e, s));
        return detail::render(detail::with_type(t.env.header, "local_map"), io::local_map_to_json(m));
      });
      detail::write_sink(out_path, text, s);
      return kOk;
    }
    if (invert->parsed()) {
      auto in = load(input_path, s);
      Side sd = detail::parse_side(side);
      bool found = false;
      auto text = with_field(in.env.header.field, [&](const auto& f) {
        auto hit = search_inverse(Nuca(detail::twisted(f, in, s)), sd, max_radius);
        found = hit.has_value();
        return detail::render(detail::with_type(in.env.header, "inverse_result"),
                              io::inverse_result_to_json(sd, max_radius, hit));
      });
      detail::write_sink(out_path, text, s);
      return found ? kOk : kMathFailure;
    }
    if (tower->parsed()) {
      auto in = load(input_path, s);
      auto text = with_field(in.env.header.field, [&](const auto& f) {
        auto r = kernel_tower(Nuca(detail::twisted(f, in, s)), depth, window, max_steps);
        return detail::render(detail::with_type(in.env.header, "kernel_tower"), io::tower_to_json(r));
      });
      detail::write_sink(out_path, text, s);
      return kOk;
    }
    if (verdict->parsed()) {
      auto in = load(input_path, s);
      auto text = with_field(in.env.header.field, [&](const auto& f) {
        auto v = stable_injectivity_verdict(Nuca(detail::twisted(f, in, s)), VerdictBudget{max_radius, depth, window});
        return detail::render(detail::with_type(in.env.header, "verdict"), io::verdict_to_json(v));
      });
      detail::write_sink(out_path, text, s);
      return kOk;
    }
    if (fmt->parsed()) {
      auto in = load(input_path, s);
      auto text = with_field(in.env.header.field, [&](const auto& f) { return detail::canonicalize(f, in, s); });
      detail::write_sink(out_path, text, s);
      return kOk;
    }
    if (verify->parsed()) {
      auto u = load(input_path, s), v = load(second_path, s);
      detail::require_compatible(u, v);
      bool ok = with_field(u.env.header.field, [&](const auto& f) {
        return verify_identity(Nuca(detail::twisted(f, u, s)), Nuca(detail::twisted(f, v, s)));
      });
      Json j;
      j["identity"] = ok;
      detail::write_sink(out_path, detail::render(detail::with_type(u.env.header, "identity_check"), j), s);
      return ok ? kOk : kMathFailure;
    }
    if (direct->parsed() || pipeline->parsed()) {
      suite.group = GroupSpec::parse(group_text);
      suite.field = FieldSpec::parse(field_text);
      suite.include_controls = !no_controls;
      auto report = direct->parsed() ? run_direct_finiteness(suite) : run_surjunctivity_pipeline(suite);
      io::Header h{suite.group, suite.field, suite.n, "suite_report"};
      detail::write_sink(out_path, detail::render(h, suite_report_to_json(report, !omit_timing)), s);
      return report.ok() ? kOk : kMathFailure;
    }
  } catch (const UsageError& e) {
    s.err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    s.err << "internal error: " << e.what() << "\n";
    return kMathFailure;
  }
  return kUsage;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  Streams s{std::cin, std::cout, std::cerr};
  return run(args, s);
}

}  // namespace d1::cli
