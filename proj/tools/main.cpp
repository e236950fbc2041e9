#include <exception>
#include <iostream>
#include <vector>

#include "tdmr/config.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const tdmr::RunConfig config = tdmr::parse_config(args);
        const std::string output = tdmr::run(config);
        std::cout << "wrote " << output << "\n";
        return tdmr::kExitOk;
    } catch (const tdmr::HelpRequested& help) {
        std::cout << help.text;
        return tdmr::kExitOk;
    } catch (const tdmr::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code();
    } catch (const tdmr::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return tdmr::kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return tdmr::kExitFailure;
    }
}
