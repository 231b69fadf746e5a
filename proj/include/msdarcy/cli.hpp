#pragma once

namespace msdarcy::cli {

enum ExitCode : int { ok = 0, config_error = 1, runtime_abort = 2, check_failed = 3 };

int main(int argc, char** argv);

}  // namespace msdarcy::cli
