#pragma once
#include "../../../vendor/json.hpp"
