#pragma once

#include <map>
#include <string>
#include <string_view>

namespace pemc {

// Maps field paths of a syntactically valid JSON document to the 1-based line
// where each value starts. Paths look like `loads[2].max_delay_slots`; the
// root is "".
class JsonLocator {
public:
	explicit JsonLocator(std::string_view text);

	// Line of the path, or of its closest located ancestor; 0 if unknown.
	int line_of(const std::string& path) const;

private:
	std::map<std::string, int> lines_;
};

} // namespace pemc
