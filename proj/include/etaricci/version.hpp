#pragma once

#define ETARICCI_VERSION "0.1.0"
