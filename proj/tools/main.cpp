#include <eqp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

namespace {

struct Pres {
  eqp_presentation* p = nullptr;
  ~Pres() { eqp_presentation_free(p); }
};

struct Str {
  char* s = nullptr;
  ~Str() { eqp_string_free(s); }
};

int exit_code(eqp_status st) {
  switch (st) {
    case EQP_OK:
      return 0;
    case EQP_CHECK_FAILED:
    case EQP_INTERNAL:
      return 1;
    case EQP_BAD_INPUT:
      return 2;
    case EQP_CAP_EXCEEDED:
      return 3;
  }
  return 1;
}

int fail(eqp_status st) {
  std::cerr << "error: " << eqp_last_error() << "\n";
  return exit_code(st);
}

bool read_file(const std::string& path, std::string& out) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    out = ss.str();
    return !std::cin.bad();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  std::ostringstream ss;
  ss << f.rdbuf();
  out = ss.str();
  return !f.bad();
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  f << text;
  return static_cast<bool>(f.flush());
}

int load(const std::string& path, Pres& out) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read " << path << "\n";
    return 2;
  }
  eqp_status st = eqp_presentation_from_json(text.c_str(), &out.p);
  if (st != EQP_OK) return fail(st);
  return 0;
}

int cmd_verify(const std::string& file, std::size_t max_cosets, long long expect_order) {
  Pres p;
  if (int rc = load(file, p)) return rc;
  Str report;
  eqp_status st = eqp_verify(p.p, max_cosets, expect_order, &report.s);
  if (!report.s) return fail(st);
  std::cout << report.s;
  return exit_code(st);
}

int cmd_deweak(const std::string& file, const std::string& outfile, const std::string& certs) {
  Pres p;
  if (int rc = load(file, p)) return rc;
  Pres finite;
  Str bundle;
  eqp_status st = eqp_deweak(p.p, 0, &finite.p, &bundle.s);
  if (st != EQP_OK) return fail(st);
  Str out;
  st = eqp_presentation_to_json(finite.p, &out.s);
  if (st != EQP_OK) return fail(st);
  if (!write_file(outfile, out.s)) {
    std::cerr << "error: cannot write " << outfile << "\n";
    return 2;
  }
  if (!certs.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(certs, ec);
    if (ec) {
      std::cerr << "error: cannot create " << certs << "\n";
      return 2;
    }
    std::string path = (std::filesystem::path(certs) / "bundle.json").string();
    if (!write_file(path, bundle.s)) {
      std::cerr << "error: cannot write " << path << "\n";
      return 2;
    }
  }
  return 0;
}

int cmd_trace_check(const std::string& file, const std::string& certs) {
  Pres p;
  if (int rc = load(file, p)) return rc;
  std::string path = (std::filesystem::path(certs) / "bundle.json").string();
  std::string bundle;
  if (!read_file(path, bundle)) {
    std::cerr << "error: cannot read " << path << "\n";
    return 2;
  }
  Str report;
  eqp_status st = eqp_trace_check(p.p, bundle.c_str(), &report.s);
  if (!report.s) return fail(st);
  std::cout << report.s;
  return exit_code(st);
}

int cmd_h2(const std::string& file) {
  Pres p;
  if (int rc = load(file, p)) return rc;
  Str report;
  eqp_status st = eqp_h2(p.p, &report.s);
  if (!report.s) return fail(st);
  std::cout << report.s;
  return exit_code(st);
}

int cmd_abelianize(const std::string& file) {
  Pres p;
  if (int rc = load(file, p)) return rc;
  Str out;
  eqp_status st = eqp_abelianize(p.p, &out.s);
  if (st != EQP_OK) return fail(st);
  std::cout << out.s;
  return 0;
}

int cmd_orbits(const std::string& file) {
  Pres p;
  if (int rc = load(file, p)) return rc;
  Str out;
  eqp_status st = eqp_orbits(p.p, &out.s);
  if (st != EQP_OK) return fail(st);
  std::cout << out.s;
  return 0;
}

int cmd_example(const std::string& name, int n) {
  Pres p;
  eqp_status st = eqp_builtin(name.c_str(), n, &p.p);
  if (st != EQP_OK) return fail(st);
  Str out;
  st = eqp_presentation_to_json(p.p, &out.s);
  if (st != EQP_OK) return fail(st);
  std::cout << out.s;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equivariant presentation toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  std::string file;
  std::size_t max_cosets = 0;
  long long expect_order = -1;
  auto* verify = app.add_subcommand("verify", "validate a presentation file");
  verify->add_option("file", file, "presentation file, or - for stdin")->required();
  verify->add_option("--max-cosets", max_cosets, "coset enumeration cap");
  verify->add_option("--expect-order", expect_order, "require this realized group order");
  verify->callback([&] { rc = cmd_verify(file, max_cosets, expect_order); });

  std::string outfile, certs;
  auto* deweak = app.add_subcommand("deweak", "convert a weak presentation to a finite one");
  deweak->add_option("file", file, "presentation file, or - for stdin")->required();
  deweak->add_option("-o,--output", outfile, "output presentation file")->required();
  deweak->add_option("--certs", certs, "directory for the certificate bundle");
  deweak->callback([&] { rc = cmd_deweak(file, outfile, certs); });

  std::string certs_dir;
  auto* tc = app.add_subcommand("trace-check", "replay a certificate bundle");
  tc->add_option("file", file, "presentation file, or - for stdin")->required();
  tc->add_option("certs", certs_dir, "directory holding bundle.json")->required();
  tc->callback([&] { rc = cmd_trace_check(file, certs_dir); });

  auto* h2 = app.add_subcommand("h2", "second homology report");
  h2->add_option("file", file, "presentation file, or - for stdin")->required();
  h2->callback([&] { rc = cmd_h2(file); });

  auto* ab = app.add_subcommand("abelianize", "abelianization of the presented group");
  ab->add_option("file", file, "presentation file, or - for stdin")->required();
  ab->callback([&] { rc = cmd_abelianize(file); });

  auto* orb = app.add_subcommand("orbits", "orbit and stabilizer summary");
  orb->add_option("file", file, "presentation file, or - for stdin")->required();
  orb->callback([&] { rc = cmd_orbits(file); });

  std::string name;
  int n = 0;
  auto* ex = app.add_subcommand("example", "emit a built-in presentation");
  ex->add_option("name", name, "z2sum, star, or hyperoct")->required();
  ex->add_option("n", n, "family parameter")->required();
  ex->callback([&] { rc = cmd_example(name, n); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return rc;
}
