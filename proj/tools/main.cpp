#include "drs/report.hpp"

int main(int argc, char** argv) { return drs::run_cli(argc, argv); }
