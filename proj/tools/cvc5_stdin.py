#!/usr/bin/env python3
# Reads SMT-LIB commands from stdin and answers them with the cvc5 Python API.
import sys

import cvc5


def main():
    tm = cvc5.TermManager()
    solver = cvc5.Solver(tm)
    solver.setOption("incremental", "true")
    symbols = cvc5.SymbolManager(tm)
    buf = ""
    for line in sys.stdin:
        buf += line
        if buf.count("(") - buf.count(")") > 0 or not buf.strip():
            continue
        parser = cvc5.InputParser(solver, symbols)
        parser.setStringInput(cvc5.InputLanguage.SMT_LIB_2_6, buf, "stdin")
        buf = ""
        while True:
            cmd = parser.nextCommand()
            if cmd.isNull():
                break
            out = cmd.invoke(solver, symbols)
            sys.stdout.write(out)
            sys.stdout.flush()
            if cmd.getCommandName() == "exit":
                return


if __name__ == "__main__":
    main()
