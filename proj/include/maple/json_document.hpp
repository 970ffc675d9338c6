#pragma once

// JSON loading with source positions. nlohmann/json does not keep byte
// offsets for values, so documents are parsed through the SAX interface with
// an input iterator that counts consumed bytes; every value's start offset is
// recorded under its JSON pointer. Readers use the offsets to report
// ParseErrors that point back into the original file.

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "maple/errors.hpp"

namespace maple {

using Json = nlohmann::ordered_json;

namespace detail {

class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator() = default;
  CountingIterator(const char* p, const char* base, std::size_t* consumed)
      : p_(p), base_(base), consumed_(consumed) {}

  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    ++p_;
    if (consumed_ != nullptr) *consumed_ = static_cast<std::size_t>(p_ - base_);
    return *this;
  }
  CountingIterator operator++(int) {
    auto tmp = *this;
    ++*this;
    return tmp;
  }
  bool operator==(const CountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const CountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_ = nullptr;
  const char* base_ = nullptr;
  std::size_t* consumed_ = nullptr;
};

inline std::string escape_pointer_token(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

class PositionedDomBuilder {
 public:
  using number_integer_t = Json::number_integer_t;
  using number_unsigned_t = Json::number_unsigned_t;
  using number_float_t = Json::number_float_t;
  using string_t = Json::string_t;
  using binary_t = Json::binary_t;

  PositionedDomBuilder(std::string_view text, const std::size_t* consumed,
                       Json& root,
                       std::unordered_map<std::string, std::size_t>& offsets)
      : text_(text), consumed_(consumed), root_(root), offsets_(offsets) {}

  bool null() { return value(Json(nullptr)); }
  bool boolean(bool v) { return value(Json(v)); }
  bool number_integer(number_integer_t v) { return value(Json(v)); }
  bool number_unsigned(number_unsigned_t v) { return value(Json(v)); }
  bool number_float(number_float_t v, const string_t&) { return value(Json(v)); }
  bool string(string_t& v) { return value(Json(v)); }
  bool binary(binary_t& v) { return value(Json::binary(v)); }

  bool start_object(std::size_t) {
    Json* slot = place(Json::object());
    stack_.push_back(Frame{slot, 0});
    return true;
  }
  bool key(string_t& k) {
    pending_key_ = k;
    mark();
    return true;
  }
  bool end_object() {
    pop();
    return true;
  }
  bool start_array(std::size_t) {
    Json* slot = place(Json::array());
    stack_.push_back(Frame{slot, 0});
    return true;
  }
  bool end_array() {
    pop();
    return true;
  }

  template <class Exception>
  bool parse_error(std::size_t position, const std::string&, const Exception& ex) {
    error_position_ = position;
    error_message_ = ex.what();
    return false;
  }

  std::optional<std::size_t> error_position() const { return error_position_; }
  const std::string& error_message() const { return error_message_; }

 private:
  struct Frame {
    Json* node;
    std::size_t next_index;
  };

  // Start offset of the value whose first token has just been lexed: skip
  // separators following the previous event's position.
  std::size_t value_start() const {
    std::size_t i = last_event_pos_;
    if (i == 0 && text_.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
    while (i < text_.size()) {
      char c = text_[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ':' || c == ',')
        ++i;
      else
        break;
    }
    return i;
  }

  void mark() { last_event_pos_ = *consumed_; }

  Json* place(Json v) {
    const std::size_t start = value_start();
    Json* slot = nullptr;
    std::string ptr;
    if (stack_.empty()) {
      root_ = std::move(v);
      slot = &root_;
    } else {
      Frame& top = stack_.back();
      if (top.node->is_object()) {
        slot = &(*top.node)[pending_key_];
        *slot = std::move(v);
        ptr = escape_pointer_token(pending_key_);
      } else {
        top.node->push_back(std::move(v));
        slot = &top.node->back();
        ptr = std::to_string(top.next_index++);
      }
    }
    if (!stack_.empty()) path_.push_back(ptr);
    std::string pointer;
    for (const auto& t : path_) pointer += "/" + t;
    offsets_[pointer] = start;
    if (!stack_.empty() && !(slot->is_object() || slot->is_array())) path_.pop_back();
    mark();
    return slot;
  }

  bool value(Json v) {
    place(std::move(v));
    return true;
  }

  void pop() {
    stack_.pop_back();
    if (!stack_.empty()) path_.pop_back();
    mark();
  }

  std::string_view text_;
  const std::size_t* consumed_;
  Json& root_;
  std::unordered_map<std::string, std::size_t>& offsets_;
  std::vector<Frame> stack_;
  std::vector<std::string> path_;
  std::string pending_key_;
  std::size_t last_event_pos_ = 0;
  std::optional<std::size_t> error_position_;
  std::string error_message_;
};

}  // namespace detail

// A parsed JSON document plus the byte offset of every value.
class JsonDocument {
 public:
  // Throws ParseError{SYNTAX} with the lexer's byte position on bad input.
  static JsonDocument parse(std::string_view text) {
    JsonDocument doc;
    std::size_t consumed = 0;
    detail::PositionedDomBuilder builder(text, &consumed, doc.root_, doc.offsets_);
    detail::CountingIterator first(text.data(), text.data(), &consumed);
    detail::CountingIterator last(text.data() + text.size(), text.data(), nullptr);
    const bool ok = Json::sax_parse(first, last, &builder);
    if (!ok) {
      const std::size_t pos = builder.error_position().value_or(consumed);
      throw ParseError("SYNTAX", "", pos > 0 ? pos - 1 : 0,
                       "malformed JSON: " + builder.error_message());
    }
    return doc;
  }

  const Json& root() const { return root_; }

  // Offset of the value at `pointer`; falls back to the closest ancestor.
  std::size_t offset_of(std::string pointer) const {
    for (;;) {
      auto it = offsets_.find(pointer);
      if (it != offsets_.end()) return it->second;
      if (pointer.empty()) return 0;
      pointer.erase(pointer.rfind('/'));
    }
  }

 private:
  Json root_;
  std::unordered_map<std::string, std::size_t> offsets_;
};

// Cursor over one JSON object inside a JsonDocument. Carries both the
// human-readable field path and the JSON pointer so errors can name the field
// and locate it in the source.
class FieldReader {
 public:
  FieldReader(const JsonDocument& doc, const Json& node, std::string path,
              std::string pointer)
      : doc_(&doc), node_(&node), path_(std::move(path)), pointer_(std::move(pointer)) {}

  static FieldReader root(const JsonDocument& doc) {
    return FieldReader(doc, doc.root(), "", "");
  }

  const Json& node() const { return *node_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& code, const std::string& message) const {
    throw ParseError(code, path_, doc_->offset_of(pointer_), message);
  }

  void expect_object() const {
    if (!node_->is_object()) fail("WRONG_TYPE", "expected an object");
  }

  bool has(const std::string& key) const {
    return node_->is_object() && node_->contains(key) && !(*node_)[key].is_null();
  }

  FieldReader field(const std::string& key) const {
    expect_object();
    auto it = node_->find(key);
    if (it == node_->end()) {
      throw ParseError("MISSING_FIELD", join(key), doc_->offset_of(pointer_),
                       "missing required field '" + key + "'");
    }
    return FieldReader(*doc_, *it, join(key),
                       pointer_ + "/" + detail::escape_pointer_token(key));
  }

  FieldReader element(std::size_t index) const {
    return FieldReader(*doc_, (*node_)[index], path_ + "[" + std::to_string(index) + "]",
                       pointer_ + "/" + std::to_string(index));
  }

  std::string as_string() const {
    if (!node_->is_string()) fail("WRONG_TYPE", "expected a string");
    return node_->get<std::string>();
  }

  std::int64_t as_int() const {
    if (!node_->is_number_integer()) fail("WRONG_TYPE", "expected an integer");
    if (node_->is_number_unsigned() &&
        node_->get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
      fail("BAD_VALUE", "integer out of range");
    return node_->get<std::int64_t>();
  }

  double as_number() const {
    if (!node_->is_number()) fail("WRONG_TYPE", "expected a number");
    return node_->get<double>();
  }

  bool as_bool() const {
    if (!node_->is_boolean()) fail("WRONG_TYPE", "expected a boolean");
    return node_->get<bool>();
  }

  std::size_t array_size() const {
    if (!node_->is_array()) fail("WRONG_TYPE", "expected an array");
    return node_->size();
  }

  std::vector<std::string> string_list() const {
    std::vector<std::string> out;
    const std::size_t n = array_size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(element(i).as_string());
    return out;
  }

  std::optional<std::string> optional_string(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return field(key).as_string();
  }

  std::optional<std::int64_t> optional_int(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return field(key).as_int();
  }

  // Rejects keys outside `allowed`; catches typos in hand-edited files.
  void reject_unknown(std::initializer_list<std::string_view> allowed) const {
    expect_object();
    for (auto it = node_->begin(); it != node_->end(); ++it) {
      bool known = false;
      for (auto a : allowed) known = known || a == it.key();
      if (!known) {
        throw ParseError("UNKNOWN_FIELD", join(it.key()),
                         doc_->offset_of(pointer_ + "/" +
                                         detail::escape_pointer_token(it.key())),
                         "unknown field '" + it.key() + "'");
      }
    }
  }

 private:
  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const JsonDocument* doc_;
  const Json* node_;
  std::string path_;
  std::string pointer_;
};

}  // namespace maple
