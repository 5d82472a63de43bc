#include "pemc/json_locator.hpp"

#include <cctype>

namespace pemc {

namespace {

// Structural scanner. The document has already been accepted by the real
// parser, so this only tracks nesting, keys and line numbers.
class Scanner {
public:
	Scanner(std::string_view text, std::map<std::string, int>& out) : text_(text), out_(out) {}

	void run() {
		skip_ws();
		value("");
	}

private:
	void skip_ws() {
		while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
			if (text_[pos_] == '\n') {
				++line_;
			}
			++pos_;
		}
	}

	std::string string_token() {
		std::string s;
		++pos_; // opening quote
		while (pos_ < text_.size() && text_[pos_] != '"') {
			if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
				s += text_[pos_ + 1];
				pos_ += 2;
				continue;
			}
			s += text_[pos_++];
		}
		++pos_; // closing quote
		return s;
	}

	void value(const std::string& path) {
		if (pos_ >= text_.size()) {
			return;
		}
		out_.emplace(path, line_);
		const char c = text_[pos_];
		if (c == '{') {
			object(path);
		} else if (c == '[') {
			array(path);
		} else if (c == '"') {
			string_token();
		} else {
			while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '}' && text_[pos_] != ']'
				&& !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
				++pos_;
			}
		}
	}

	void object(const std::string& path) {
		++pos_;
		skip_ws();
		while (pos_ < text_.size() && text_[pos_] != '}') {
			const std::string key = string_token();
			skip_ws();
			++pos_; // ':'
			skip_ws();
			value(path.empty() ? key : path + "." + key);
			skip_ws();
			if (pos_ < text_.size() && text_[pos_] == ',') {
				++pos_;
				skip_ws();
			}
		}
		++pos_;
	}

	void array(const std::string& path) {
		++pos_;
		skip_ws();
		std::size_t index = 0;
		while (pos_ < text_.size() && text_[pos_] != ']') {
			value(path + "[" + std::to_string(index++) + "]");
			skip_ws();
			if (pos_ < text_.size() && text_[pos_] == ',') {
				++pos_;
				skip_ws();
			}
		}
		++pos_;
	}

	std::string_view text_;
	std::map<std::string, int>& out_;
	std::size_t pos_ = 0;
	int line_ = 1;
};

} // namespace

JsonLocator::JsonLocator(std::string_view text) {
	Scanner(text, lines_).run();
}

int JsonLocator::line_of(const std::string& path) const {
	std::string p = path;
	while (true) {
		if (auto it = lines_.find(p); it != lines_.end()) {
			return it->second;
		}
		if (p.empty()) {
			return 0;
		}
		const auto cut = p.find_last_of(".[");
		p = cut == std::string::npos ? std::string() : p.substr(0, cut);
	}
}

} // namespace pemc
