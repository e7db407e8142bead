#include "gridinertia/cli/commands.hpp"

int main(int argc, char** argv) { return gridinertia::cli::main_entry(argc, argv); }
