#ifndef DTQ_IO_HPP
#define DTQ_IO_HPP

#include <string>

namespace dtq {

// Reads a whole file; throws IoError naming the path.
std::string read_file(const std::string& path);

// Writes to "<path>.tmp" and renames over path, so readers never see a
// partially written file.
void write_file_atomic(const std::string& path, const std::string& content);

// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace dtq

#endif
