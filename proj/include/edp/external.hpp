#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "edp/cnf.hpp"
#include "edp/dimacs.hpp"
#include "edp/outcome.hpp"

namespace edp {

struct ExternalResult {
    SolveOutcome outcome;
    std::string raw_output;
    int exit_code = -1;  // exit status, or -signal when the child was killed
    bool timed_out = false;
};

namespace detail {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        char name[] = "/tmp/edp-cnf-XXXXXX";
        const int fd = ::mkstemp(name);
        if (fd < 0) throw std::runtime_error("mkstemp failed: " + std::string(std::strerror(errno)));
        path = name;
        std::size_t written = 0;
        while (written < contents.size()) {
            const ssize_t n = ::write(fd, contents.data() + written, contents.size() - written);
            if (n < 0) {
                ::close(fd);
                ::unlink(name);
                throw std::runtime_error("writing temp CNF failed: " +
                                         std::string(std::strerror(errno)));
            }
            written += static_cast<std::size_t>(n);
        }
        ::close(fd);
    }
    ~TempFile() { ::unlink(path.c_str()); }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;
};

inline std::vector<std::string> tokenize_command(const std::string& command) {
    std::istringstream in(command);
    std::vector<std::string> tokens;
    std::string token;
    while (in >> token) tokens.push_back(token);
    if (tokens.empty()) throw std::invalid_argument("external solver command is empty");
    return tokens;
}

}  // namespace detail

/// Run `<command> <cnf-path>` and interpret its stdout as SAT-competition
/// output. The s-line is the only thing believed: exit codes never decide a
/// verdict, a claimed model is re-checked against the formula (a lying
/// solver is a hard error, not an UNSAT), and on timeout the child is killed
/// and reaped and the result is UNKNOWN rather than a guess. A command that
/// cannot be executed at all throws, since that is a configuration problem
/// instead of a solver answer.
inline ExternalResult solve_external(const std::string& command, const Formula& f,
                                     std::optional<std::chrono::milliseconds> timeout = {}) {
    const std::vector<std::string> tokens = detail::tokenize_command(command);
    const detail::TempFile cnf(emit_dimacs(f));

    std::vector<char*> argv;
    argv.reserve(tokens.size() + 2);
    for (const std::string& t : tokens) argv.push_back(const_cast<char*>(t.c_str()));
    argv.push_back(const_cast<char*>(cnf.path.c_str()));
    argv.push_back(nullptr);

    int out_pipe[2];
    int err_pipe[2];  // reports exec failure; closed on successful exec
    if (::pipe(out_pipe) != 0) throw std::runtime_error("pipe failed");
    if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        throw std::runtime_error("pipe failed");
    }

    const pid_t pid = ::fork();
    if (pid < 0) {
        for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) ::close(fd);
        throw std::runtime_error("fork failed: " + std::string(std::strerror(errno)));
    }
    if (pid == 0) {
        ::setpgid(0, 0);  // own process group, so a timeout can kill helpers too
        ::close(out_pipe[0]);
        ::close(err_pipe[0]);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::close(out_pipe[1]);
        ::execvp(argv[0], argv.data());
        const int code = errno;
        [[maybe_unused]] ssize_t ignored = ::write(err_pipe[1], &code, sizeof(code));
        ::_exit(127);
    }

    ::setpgid(pid, pid);  // mirror of the child's call; one of the two wins the race
    ::close(out_pipe[1]);
    ::close(err_pipe[1]);

    int exec_errno = 0;
    const ssize_t got = ::read(err_pipe[0], &exec_errno, sizeof(exec_errno));
    ::close(err_pipe[0]);
    if (got > 0) {
        ::close(out_pipe[0]);
        int status = 0;
        ::waitpid(pid, &status, 0);
        throw std::runtime_error("cannot execute external solver '" + tokens[0] +
                                 "': " + std::strerror(exec_errno));
    }

    ExternalResult result;
    const auto deadline = timeout ? std::optional(std::chrono::steady_clock::now() + *timeout)
                                  : std::nullopt;
    bool open = true;
    char buffer[4096];
    while (open) {
        int wait_ms = -1;
        if (deadline && !result.timed_out) {
            const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                *deadline - std::chrono::steady_clock::now());
            if (remaining.count() <= 0) {
                if (::kill(-pid, SIGKILL) != 0) ::kill(pid, SIGKILL);
                result.timed_out = true;
            } else {
                wait_ms = static_cast<int>(remaining.count()) + 1;
            }
        }
        pollfd pfd{out_pipe[0], POLLIN, 0};
        const int ready = ::poll(&pfd, 1, result.timed_out ? -1 : wait_ms);
        if (ready < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (ready == 0) continue;  // deadline re-checked at the top
        const ssize_t n = ::read(out_pipe[0], buffer, sizeof(buffer));
        if (n > 0)
            result.raw_output.append(buffer, static_cast<std::size_t>(n));
        else
            open = false;
    }
    ::close(out_pipe[0]);

    int status = 0;
    ::waitpid(pid, &status, 0);
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = -WTERMSIG(status);

    const ParsedSolverOutput parsed = parse_solver_output(result.raw_output, f.num_vars());
    if (parsed.outcome.status == SolveStatus::sat) {
        if (!parsed.outcome.model.satisfies(f))
            throw std::runtime_error(
                "external solver reported SATISFIABLE with a non-satisfying model");
        result.outcome = parsed.outcome;
    } else if (parsed.outcome.status == SolveStatus::unsat) {
        result.outcome = parsed.outcome;
    } else if (result.timed_out) {
        result.outcome = SolveOutcome::unknown(UnknownReason::budget);
    } else if (result.exit_code != 0) {
        result.outcome = SolveOutcome::unknown(UnknownReason::crash);
    } else {
        result.outcome = SolveOutcome::unknown(UnknownReason::parse);
    }
    return result;
}

}  // namespace edp
