#ifndef FKM_IO_HPP
#define FKM_IO_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fkm/coreset.hpp"
#include "fkm/dataset.hpp"
#include "fkm/streaming.hpp"

namespace fkm {

/// Key=value comment lines ("# key=value") found in a point file header.
using HeaderEcho = std::vector<std::pair<std::string, std::string>>;

/// Text point format: one point per line, comma-separated decimal floats.
/// A "# weighted" header line switches the final column to an integer weight.
/// Blank lines and "#" comments are ignored.
void write_points(std::ostream& out, const WeightedDataset& x,
                  const HeaderEcho& echo = {});
WeightedDataset read_points(std::istream& in,
                            std::map<std::string, std::string>* header = nullptr);

void write_points_file(const std::string& path, const WeightedDataset& x,
                       const HeaderEcho& echo = {});
WeightedDataset read_points_file(const std::string& path,
                                 std::map<std::string, std::string>* header = nullptr);

/// Coreset files use the weighted point format; the header records the source
/// total plus whatever build echo the caller supplies.
void write_coreset(std::ostream& out, const Coreset& coreset,
                   const HeaderEcho& echo = {});
Coreset read_coreset(std::istream& in,
                     std::map<std::string, std::string>* header = nullptr);

void write_coreset_file(const std::string& path, const Coreset& coreset,
                        const HeaderEcho& echo = {});
Coreset read_coreset_file(const std::string& path,
                          std::map<std::string, std::string>* header = nullptr);

/// Stream checkpoints: configuration, counters, buffer, and the level
/// coresets, as text. Loading reconstructs an equivalent stream.
void save_checkpoint(std::ostream& out, const CoresetStream& stream);
CoresetStream load_checkpoint(std::istream& in);

void save_checkpoint_file(const std::string& path, const CoresetStream& stream);
CoresetStream load_checkpoint_file(const std::string& path);

std::string format_double(double value);

}  // namespace fkm

#endif
