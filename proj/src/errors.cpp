#include "zlab/errors.hpp"
