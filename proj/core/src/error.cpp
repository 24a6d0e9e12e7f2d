#include "netcarta/error.hpp"
