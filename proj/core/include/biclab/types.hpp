#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace biclab {

inline constexpr const char* kVersion = "0.1.0";

class error : public std::runtime_error {
  public:
	using std::runtime_error::runtime_error;
};

enum class Boundary { Periodic, Open };

// Chain sites run x = -L..L; site 0 carries the impurity potential.
struct LatticeSpec {
	int      half_length = 1;
	Boundary boundary    = Boundary::Periodic;

	int site_count() const { return 2 * half_length + 1; }

	// site coordinate -> storage index 0..M-1 (left to right)
	int index_of(int x) const {
		if(x < -half_length || x > half_length)
			throw error("site " + std::to_string(x) + " outside [-L, L] with L = "
			            + std::to_string(half_length));
		return x + half_length;
	}
	int site_of(int index) const { return index - half_length; }
};

struct ModelParams {
	double t = 1.0;  // hopping amplitude
	double U = 0.0;  // on-site interaction
	double V = 0.0;  // impurity potential at site 0
};

using occupation_t = std::uint8_t;
using FockState    = std::vector<occupation_t>;

enum class Parity { Even, Odd, None };

inline const char* to_string(Parity p) {
	switch(p) {
	case Parity::Even: return "even";
	case Parity::Odd: return "odd";
	default: return "none";
	}
}

}  // namespace biclab
