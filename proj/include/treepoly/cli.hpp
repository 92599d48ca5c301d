// The `treepoly` command line, callable in-process for testing.
//
//   treepoly <verb> [flags]
//     enumerate --n N
//     density   (--tree T | --file F) --n N   |   --n N --m M [--csv PATH]
//     project   (--dist JSON | --file F) --n N
//     hull      --n N --m M [--json PATH]
//     model     beta --n N --beta B
//               multinomial (--skeleton S --weights W | --file F) --n N
//               lower (--rule Q | --file F)
//     verify    (--all | --claim ID ...) [--json] [--timing]
//     figure    (fig4 | fig5 | fig6) --out DIR
//
// Global flags: --decimal K, --threads K. Exit status 0 on success, 1 on a
// domain error or failed claim, 2 on a usage error.

#ifndef TREEPOLY_CLI_HPP
#define TREEPOLY_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace treepoly {

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treepoly

#endif  // TREEPOLY_CLI_HPP
