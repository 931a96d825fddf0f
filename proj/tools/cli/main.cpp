#include "iqc/emit.hpp"

int main(int argc, char** argv) { return iqc::run_cli(argc, argv); }
