// Copyright 2026 The qk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qk/args.hpp"

#include <json.hpp>

#include "qk/error.hpp"

namespace qk {

using json = nlohmann::ordered_json;

ArgPack::ArgPack(std::initializer_list<std::pair<std::string, ArgValue>> items) {
  for (const auto& [k, v] : items) set(k, v);
}

ArgPack& ArgPack::set(const std::string& name, ArgValue value) {
  for (auto& [k, v] : items_) {
    if (k == name) {
      v = std::move(value);
      return *this;
    }
  }
  items_.emplace_back(name, std::move(value));
  return *this;
}

const ArgValue* ArgPack::find(std::string_view name) const {
  for (const auto& [k, v] : items_) {
    if (k == name) return &v;
  }
  return nullptr;
}

namespace {

[[noreturn]] void bad_json(const std::string& msg) {
  throw Error(ErrorCode::TypeMismatch, "argument file: " + msg);
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_string()) return parse_complex(j.get<std::string>());
  bad_json("matrix entries are numbers, [re, im] pairs or complex strings");
}

CValue cvalue_from_json(const json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  bad_json("ref cells hold a bool, int or float");
}

ArgValue from_json(const json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    ArgList items;
    for (const auto& x : j) items.push_back(from_json(x));
    return items;
  }
  if (j.is_object()) {
    if (j.size() == 1 && j.contains("size")) {
      if (!j["size"].is_number_integer() || j["size"].get<std::int64_t>() < 1) {
        bad_json("register size must be a positive integer");
      }
      return QRegArg{static_cast<int>(j["size"].get<std::int64_t>())};
    }
    if (j.size() == 1 && j.contains("kernel") && j["kernel"].is_string()) {
      return KernelRef{j["kernel"].get<std::string>()};
    }
    if (j.size() == 1 && j.contains("ref")) {
      RefArg r;
      *r.cell = cvalue_from_json(j["ref"]);
      return r;
    }
    if (j.size() == 1 && j.contains("pauli") && j["pauli"].is_string()) {
      return parse_pauli(j["pauli"].get<std::string>());
    }
    if (j.size() == 1 && j.contains("matrix") && j["matrix"].is_array()) {
      const json& rows = j["matrix"];
      const auto n = static_cast<Eigen::Index>(rows.size());
      Matrix m(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        if (!rows[r].is_array() || static_cast<Eigen::Index>(rows[r].size()) != n) {
          bad_json("matrix must be square");
        }
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from_json(rows[r][c]);
      }
      return m;
    }
  }
  bad_json("unsupported value " + j.dump());
}

json cvalue_to_json(const CValue& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

json to_json(const ArgValue& a) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, QRegArg>) {
          return json{{"size", x.size}};
        } else if constexpr (std::is_same_v<T, ArgList>) {
          json out = json::array();
          for (const auto& i : x) out.push_back(to_json(i));
          return out;
        } else if constexpr (std::is_same_v<T, PauliOperator>) {
          return json{{"pauli", x.to_string()}};
        } else if constexpr (std::is_same_v<T, KernelRef>) {
          return json{{"kernel", x.name}};
        } else if constexpr (std::is_same_v<T, RefArg>) {
          return json{{"ref", cvalue_to_json(*x.cell)}};
        } else if constexpr (std::is_same_v<T, Matrix>) {
          json rows = json::array();
          for (Eigen::Index r = 0; r < x.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < x.cols(); ++c) {
              row.push_back(json::array({x(r, c).real(), x(r, c).imag()}));
            }
            rows.push_back(row);
          }
          return json{{"matrix", rows}};
        } else {
          return json(x);
        }
      },
      a.v);
}

Value to_value(const ArgValue& a, const std::string& what) {
  return std::visit(
      [&](const auto& x) -> Value {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, QRegArg>) {
          throw Error(ErrorCode::TypeMismatch,
                      what + ": only the first parameter may be a register");
        } else if constexpr (std::is_same_v<T, ArgList>) {
          ValueList items;
          for (const auto& i : x) items.push_back(to_value(i, what));
          return make_list(std::move(items));
        } else if constexpr (std::is_same_v<T, KernelRef>) {
          return KernelHandle{x.name};
        } else if constexpr (std::is_same_v<T, RefArg>) {
          return RefCell{std::make_shared<Value>(
              std::visit([](const auto& c) { return Value(c); }, *x.cell))};
        } else {
          return Value(x);
        }
      },
      a.v);
}

}  // namespace

ArgPack argpack_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad_json(e.what());
  }
  if (!j.is_object()) bad_json("top level must be an object");
  ArgPack pack;
  for (const auto& [k, v] : j.items()) pack.set(k, from_json(v));
  return pack;
}

std::string argpack_to_json(const ArgPack& pack) {
  json j = json::object();
  for (const auto& [k, v] : pack.items()) j[k] = to_json(v);
  return j.dump();
}

BoundArgs bind_args(const CompiledKernel& k, const ArgPack& pack, const KernelRegistry& registry) {
  for (const auto& [name, v] : pack.items()) {
    bool known = false;
    for (const auto& p : k.params) known = known || p.name == name;
    if (!known) {
      throw Error(ErrorCode::ArityError, "kernel '" + k.name + "' has no parameter '" + name + "'");
    }
  }
  BoundArgs out;
  for (std::size_t i = 0; i < k.params.size(); ++i) {
    const Param& p = k.params[i];
    const ArgValue* a = pack.find(p.name);
    if (!a) {
      throw Error(ErrorCode::ArityError, "missing argument '" + p.name + "' for '" + k.name + "'");
    }
    const std::string what = "argument '" + p.name + "' of '" + k.name + "'";
    if (i == 0) {
      auto q = std::get_if<QRegArg>(&a->v);
      if (!q || p.type.kind != TypeKind::Qreg) {
        throw Error(ErrorCode::TypeMismatch, what + " must be a register {\"size\": n}");
      }
      QRegView view;
      for (int j = 0; j < q->size; ++j) view.qubits.push_back(j);
      out.values.emplace_back(std::move(view));
      out.qreg_size = q->size;
      out.qreg_name = p.name;
      continue;
    }
    Value v = coerce_to(to_value(*a, what), p.type, registry, what);
    if (auto r = v.as<RefCell>()) out.refs[p.name] = r->cell;
    out.values.push_back(std::move(v));
  }
  return out;
}

std::map<std::string, CValue> collect_byref(const BoundArgs& bound) {
  std::map<std::string, CValue> out;
  for (const auto& [name, cell] : bound.refs) {
    if (auto b = cell->as<bool>()) out[name] = *b;
    if (auto i = cell->as<std::int64_t>()) out[name] = *i;
    if (auto d = cell->as<double>()) out[name] = *d;
  }
  return out;
}

void persist_byref(QReg& q, const std::map<std::string, CValue>& slots) {
  for (const auto& [name, v] : slots) q.results.byref[name] = v;
}

void write_back(const ArgPack& pack, const std::map<std::string, CValue>& slots) {
  for (const auto& [name, v] : slots) {
    const ArgValue* a = pack.find(name);
    if (!a) continue;
    if (auto r = std::get_if<RefArg>(&a->v)) *r->cell = v;
  }
}

}  // namespace qk
