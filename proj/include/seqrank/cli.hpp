#pragma once

namespace seqrank {

// Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.
int cli_main(int argc, char** argv);

}  // namespace seqrank
