#include "cleanreg/program.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cleanreg {

void Program::validate() const {
  if (banks.empty()) throw std::invalid_argument("program has no register banks");
  std::set<std::string> names;
  for (auto& b : banks) {
    if (b.size < 1) throw std::invalid_argument("bank '" + b.name + "' has size 0");
    if (b.name.empty()) throw std::invalid_argument("bank with empty name");
    if (!names.insert(b.name).second)
      throw std::invalid_argument("duplicate bank name '" + b.name + "'");
  }
  if (input_bank >= banks.size()) throw std::invalid_argument("input bank out of range");

  auto check_ref = [&](RegRef r, const char* what) {
    if (r.bank >= banks.size() || r.index >= banks[r.bank].size)
      throw std::invalid_argument(std::string(what) + ": register reference out of range");
  };

  for (auto& ins : instructions) {
    if (auto* upd = std::get_if<BasicUpdate>(&ins)) {
      check_ref(upd->target, "basic update");
      const RegisterBank& bank = banks[upd->target.bank];
      if (upd->payload.field() != bank.field)
        throw std::invalid_argument("payload field differs from bank field");
      if (upd->payload.num_vars() != bank.size)
        throw std::invalid_argument("payload variable space does not match bank size");
      for (auto& t : upd->payload.terms())
        for (auto& [v, e] : t.mono.factors)
          if (v == upd->target.index)
            throw std::invalid_argument("payload references its own target register");
    } else {
      auto& acc = std::get<InputAccess>(ins);
      if (acc.input >= num_inputs)
        throw std::invalid_argument("input access index out of range");
      if (acc.deliveries.empty())
        throw std::invalid_argument("input access with no deliveries");
      uint16_t bank = acc.deliveries[0].reg.bank;
      for (auto& d : acc.deliveries) {
        check_ref(d.reg, "input access");
        if (d.reg.bank != bank)
          throw std::invalid_argument("input access deliveries span multiple banks");
        if (d.coeff >= banks[bank].field.modulus())
          throw std::invalid_argument("delivery coefficient not reduced");
      }
      if (banks[bank].field != banks[input_bank].field)
        throw std::invalid_argument("input delivered into a bank with a different field");
    }
  }

  std::set<RegRef> out_regs;
  std::set<uint32_t> out_idx;
  for (auto& o : outputs) {
    check_ref(o.reg, "output");
    if (!out_regs.insert(o.reg).second)
      throw std::invalid_argument("duplicate output register");
    if (!out_idx.insert(o.index).second)
      throw std::invalid_argument("duplicate output index");
    if (o.index >= outputs.size())
      throw std::invalid_argument("output indices must be 0..k-1");
  }
}

ResourceProfile resources(const Program& p) {
  ResourceProfile r;
  r.recursive_calls.assign(p.num_inputs, 0);
  for (auto& b : p.banks) r.registers.push_back({b.name, b.size});
  for (auto& ins : p.instructions) {
    if (auto* upd = std::get_if<BasicUpdate>(&ins)) {
      ++r.basic_instructions;
      r.payload_monomials += upd->payload.terms().size();
    } else {
      ++r.recursive_calls[std::get<InputAccess>(ins).input];
    }
  }
  return r;
}

Program invert(const Program& p) {
  Program q = p;
  std::reverse(q.instructions.begin(), q.instructions.end());
  for (auto& ins : q.instructions) {
    if (auto* upd = std::get_if<BasicUpdate>(&ins)) {
      upd->payload = upd->payload.negate();
    } else {
      auto& acc = std::get<InputAccess>(ins);
      const PrimeField& f = p.banks[acc.deliveries[0].reg.bank].field;
      for (auto& d : acc.deliveries) d.coeff = f.neg(d.coeff);
    }
  }
  q.claimed_profile.reset();
  return q;
}

bool outputs_write_only(const Program& p) {
  std::set<RegRef> outs;
  for (auto& o : p.outputs) outs.insert(o.reg);
  for (auto& ins : p.instructions) {
    auto* upd = std::get_if<BasicUpdate>(&ins);
    if (!upd) continue;
    for (auto& t : upd->payload.terms())
      for (auto& [v, e] : t.mono.factors)
        if (outs.count(RegRef{upd->target.bank, v})) return false;
  }
  return true;
}

// ------------------------------------------------------------- text format

namespace {

std::string reg_name(const Program& p, RegRef r) {
  return p.banks[r.bank].name + "[" + std::to_string(r.index) + "]";
}

}  // namespace

std::string serialize(const Program& p) {
  std::ostringstream os;
  os << "program " << p.name << "\n";
  for (auto& b : p.banks)
    os << "bank " << b.name << " p=" << to_string(b.field.modulus())
       << " size=" << b.size << "\n";
  os << "inputs " << p.num_inputs << " bank " << p.banks[p.input_bank].name << "\n";
  for (auto& ins : p.instructions) {
    if (auto* upd = std::get_if<BasicUpdate>(&ins)) {
      const std::string bank = p.banks[upd->target.bank].name;
      os << "upd " << reg_name(p, upd->target) << " += "
         << upd->payload.render([&](uint32_t v) {
              return bank + "[" + std::to_string(v) + "]";
            })
         << "\n";
    } else {
      auto& acc = std::get<InputAccess>(ins);
      os << "acc x" << acc.input + 1 << " :";
      bool first = true;
      for (auto& d : acc.deliveries) {
        os << (first ? " " : ", ") << reg_name(p, d.reg) << "*" << to_string(d.coeff);
        first = false;
      }
      os << "\n";
    }
  }
  for (auto& o : p.outputs)
    os << "out " << reg_name(p, o.reg) << " -> " << o.index << "\n";
  os << "end\n";
  return os.str();
}

namespace {

struct LineQueue {
  std::vector<std::pair<size_t, std::string>> lines;  // (line number, content)

  explicit LineQueue(const std::string& text) {
    std::istringstream is(text);
    std::string raw;
    size_t n = 0;
    while (std::getline(is, raw)) {
      ++n;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw = raw.substr(0, hash);
      size_t a = raw.find_first_not_of(" \t\r");
      if (a == std::string::npos) continue;
      size_t b = raw.find_last_not_of(" \t\r");
      lines.push_back({n, raw.substr(a, b - a + 1)});
    }
  }
};

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

// "<bank>[<idx>]" -> (bank name, idx)
std::pair<std::string, uint32_t> parse_reg_token(const std::string& tok, size_t line) {
  auto lb = tok.find('[');
  auto rb = tok.find(']');
  if (lb == std::string::npos || rb == std::string::npos || rb != tok.size() - 1 || lb == 0)
    throw ProgramParseError(line, "malformed register reference '" + tok + "'");
  std::string idx = tok.substr(lb + 1, rb - lb - 1);
  if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos)
    throw ProgramParseError(line, "malformed register index in '" + tok + "'");
  return {tok.substr(0, lb), uint32_t(std::stoul(idx))};
}

}  // namespace

Program parse_program(const std::string& text) {
  LineQueue q(text);
  if (q.lines.empty()) throw ProgramParseError(0, "empty program text");

  Program p;
  p.banks.clear();
  size_t i = 0;
  auto& [first_no, first] = q.lines[i];
  {
    auto w = split_ws(first);
    if (w.size() != 2 || w[0] != "program")
      throw ProgramParseError(first_no, "expected 'program <name>'");
    p.name = w[1];
    ++i;
  }

  auto bank_index = [&](const std::string& name, size_t line) -> uint16_t {
    for (size_t b = 0; b < p.banks.size(); ++b)
      if (p.banks[b].name == name) return uint16_t(b);
    throw ProgramParseError(line, "unknown bank '" + name + "'");
  };

  bool saw_end = false;
  bool saw_inputs = false;
  for (; i < q.lines.size(); ++i) {
    auto& [no, line] = q.lines[i];
    auto w = split_ws(line);
    const std::string& kw = w[0];
    if (saw_end) throw ProgramParseError(no, "content after 'end'");

    if (kw == "bank") {
      if (w.size() != 4) throw ProgramParseError(no, "expected 'bank <name> p=<prime> size=<k>'");
      RegisterBank b;
      b.name = w[1];
      if (w[2].rfind("p=", 0) != 0 || w[3].rfind("size=", 0) != 0)
        throw ProgramParseError(no, "expected 'bank <name> p=<prime> size=<k>'");
      try {
        b.field = PrimeField(parse_u128(w[2].substr(2)));
      } catch (const std::exception& e) {
        throw ProgramParseError(no, e.what());
      }
      b.size = uint32_t(std::stoul(w[3].substr(5)));
      p.banks.push_back(std::move(b));
    } else if (kw == "inputs") {
      if (w.size() != 4 || w[2] != "bank")
        throw ProgramParseError(no, "expected 'inputs <n> bank <bankname>'");
      p.num_inputs = uint32_t(std::stoul(w[1]));
      p.input_bank = bank_index(w[3], no);
      saw_inputs = true;
    } else if (kw == "acc") {
      // acc x<j> : <bank>[<i>]*<coeff>, ...
      auto colon = line.find(':');
      if (colon == std::string::npos) throw ProgramParseError(no, "expected ':' in acc line");
      auto head = split_ws(line.substr(0, colon));
      if (head.size() != 2 || head[1].size() < 2 || head[1][0] != 'x')
        throw ProgramParseError(no, "expected 'acc x<j> : ...'");
      InputAccess acc;
      unsigned long xi = std::stoul(head[1].substr(1));
      if (xi == 0) throw ProgramParseError(no, "input indices are 1-based");
      acc.input = uint32_t(xi - 1);
      std::string rest = line.substr(colon + 1);
      std::istringstream ds(rest);
      std::string item;
      while (std::getline(ds, item, ',')) {
        auto star = item.find('*');
        if (star == std::string::npos) throw ProgramParseError(no, "delivery missing '*<coeff>'");
        auto wreg = split_ws(item.substr(0, star));
        auto wco = split_ws(item.substr(star + 1));
        if (wreg.size() != 1 || wco.size() != 1)
          throw ProgramParseError(no, "malformed delivery '" + item + "'");
        auto [bname, idx] = parse_reg_token(wreg[0], no);
        uint16_t b = bank_index(bname, no);
        u128 coeff;
        try {
          coeff = parse_u128(wco[0]);
        } catch (const std::exception& e) {
          throw ProgramParseError(no, e.what());
        }
        acc.deliveries.push_back({RegRef{b, idx}, coeff});
      }
      if (acc.deliveries.empty()) throw ProgramParseError(no, "acc line with no deliveries");
      p.instructions.push_back(std::move(acc));
    } else if (kw == "upd") {
      auto plus = line.find("+=");
      if (plus == std::string::npos) throw ProgramParseError(no, "expected '+=' in upd line");
      auto head = split_ws(line.substr(3, plus - 3));
      if (head.size() != 1) throw ProgramParseError(no, "expected 'upd <bank>[<i>] += <poly>'");
      auto [bname, idx] = parse_reg_token(head[0], no);
      uint16_t b = bank_index(bname, no);
      std::string ptext = line.substr(plus + 2);
      SparsePoly payload;
      try {
        payload = parse_poly(
            ptext, p.banks[b].field, p.banks[b].size, /*allow_minus=*/false,
            [&](const std::string& tok) -> uint32_t {
              auto [vbank, vidx] = parse_reg_token(tok, no);
              if (vbank != bname)
                throw std::invalid_argument("payload variable '" + tok +
                                            "' not in bank '" + bname + "'");
              if (vidx >= p.banks[b].size)
                throw std::invalid_argument("payload register out of range: " + tok);
              return vidx;
            });
      } catch (const ProgramParseError&) {
        throw;
      } catch (const std::exception& e) {
        throw ProgramParseError(no, e.what());
      }
      p.instructions.push_back(BasicUpdate{RegRef{b, idx}, std::move(payload)});
    } else if (kw == "out") {
      if (w.size() != 4 || w[2] != "->")
        throw ProgramParseError(no, "expected 'out <bank>[<i>] -> <output#>'");
      auto [bname, idx] = parse_reg_token(w[1], no);
      p.outputs.push_back({RegRef{bank_index(bname, no), idx}, uint32_t(std::stoul(w[3]))});
    } else if (kw == "end") {
      saw_end = true;
    } else {
      throw ProgramParseError(no, "unknown directive '" + kw + "'");
    }
  }
  if (!saw_end) throw ProgramParseError(q.lines.back().first, "missing 'end'");
  if (!saw_inputs) throw ProgramParseError(q.lines.back().first, "missing 'inputs' line");
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw ProgramParseError(q.lines.back().first, e.what());
  }
  return p;
}

std::vector<std::pair<std::string, std::string>> parse_meta(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> meta;
  std::istringstream is(text);
  std::string raw;
  while (std::getline(is, raw)) {
    size_t a = raw.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    if (raw.compare(a, 7, "# meta ") != 0) continue;
    std::string rest = raw.substr(a + 7);
    auto sp = rest.find(' ');
    if (sp == std::string::npos)
      meta.push_back({rest, ""});
    else
      meta.push_back({rest.substr(0, sp), rest.substr(sp + 1)});
  }
  return meta;
}

std::string render_meta(const std::vector<std::pair<std::string, std::string>>& meta) {
  std::string s;
  for (auto& [k, v] : meta) s += "# meta " + k + (v.empty() ? "" : " " + v) + "\n";
  return s;
}

}  // namespace cleanreg
