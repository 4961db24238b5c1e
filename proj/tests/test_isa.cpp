// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "properties.hpp"

using namespace ll2;
using ll2::test::reference_program;
using ll2::test::concrete_state;

TEST_SUITE("accessors")
{
    TEST_CASE("read_local on the concrete occurrences state")
    {
        auto s = concrete_state();
        CHECK(read_local(s, 1) == 8);
        CHECK(read_local(s, 2) == 399);
        CHECK(read_local(s, 0) == 100);
    }

    TEST_CASE("read after write and last write wins")
    {
        auto s = concrete_state();
        write_local(s, 3, 0);
        CHECK(read_local(s, 3) == 0);
        write_local(s, 5, 7);
        write_local(s, 5, 11);
        CHECK(read_local(s, 5) == 11);
    }

    TEST_CASE("writing locals leaves the program alone")
    {
        auto s = concrete_state();
        auto before = s.program;
        auto t = with_local(s, 4, 42);
        CHECK(t.program == before);
        CHECK(t.memory == s.memory);
        CHECK(t.stack == s.stack);
        CHECK(t.pc == s.pc);
    }

    TEST_CASE("register index out of range traps")
    {
        auto s = concrete_state();
        CHECK_THROWS_AS(read_local(s, s.locals.size()), Trap);
        try {
            write_local(s, 99, 1);
            FAIL("expected trap");
        } catch (const Trap& t) {
            CHECK(t.kind() == TrapKind::RegisterOutOfRange);
        }
    }

    TEST_CASE("memory accessors")
    {
        auto s = concrete_state();
        CHECK(read_mem(s, 106) == (Word(1) << 64) - 1);
        CHECK(read_mem(s, 100) == 399);
        auto t = with_mem(s, 3, -9);
        CHECK(read_mem(t, 3) == -9);
        try {
            (void)read_mem(s, Word(s.memory.size()));
            FAIL("expected trap");
        } catch (const Trap& e) {
            CHECK(e.kind() == TrapKind::MemoryOutOfRange);
        }
        CHECK_THROWS_AS(read_mem(s, -1), Trap);
    }
}

TEST_SUITE("execute")
{
    TEST_CASE("EQ compares registers and advances pc")
    {
        auto s = concrete_state();
        s.pc = 2;
        write_local(s, 3, 0);
        auto t = execute_instruction(Instruction::make(Opcode::Eq, 4, 1, 3), s);
        CHECK(read_local(t, 4) == 0);
        CHECK(t.pc == 3);
        write_local(s, 3, 8);
        CHECK(read_local(execute_instruction(Instruction::make(Opcode::Eq, 4, 1, 3), s), 4) == 1);
    }

    TEST_CASE("BR takes the else offset on zero")
    {
        auto s = concrete_state();
        s.pc = 20;
        write_local(s, 13, 0);
        auto t = execute_instruction(Instruction::make(Opcode::Br, 13, 1, -12), s);
        CHECK(t.pc == 8);
        write_local(s, 13, 5);
        CHECK(execute_instruction(Instruction::make(Opcode::Br, 13, 1, -12), s).pc == 21);
    }

    TEST_CASE("ADD on the conditional increment")
    {
        auto s = concrete_state();
        write_local(s, 6, 1);
        write_local(s, 9, 1);
        auto t = execute_instruction(Instruction::make(Opcode::Add, 10, 6, 9), s);
        CHECK(read_local(t, 10) == 2);
    }

    TEST_CASE("arithmetic is unbounded")
    {
        MachineState s;
        s.locals[1] = (Word(1) << 64) - 1;
        s.locals[2] = 1;
        auto t = execute_instruction(Instruction::make(Opcode::Add, 0, 1, 2), s);
        CHECK(t.locals[0] == Word(1) << 64);
        t = execute_instruction(Instruction::make(Opcode::Mul, 0, 1, 1), s);
        CHECK(t.locals[0] == ((Word(1) << 64) - 1) * ((Word(1) << 64) - 1));
        s.locals[2] = -5;
        t = execute_instruction(Instruction::make(Opcode::Sub, 0, 2, 1), s);
        CHECK(t.locals[0] == -5 - ((Word(1) << 64) - 1));
        t = execute_instruction(Instruction::make(Opcode::Lt, 0, 2, 1), s);
        CHECK(t.locals[0] == 1);
    }

    TEST_CASE("stack instructions")
    {
        MachineState s;
        s.locals[4] = 17;
        auto t = execute_instruction(Instruction::make_const(Word(1) << 80), s);
        CHECK(t.stack == std::vector<Word>{Word(1) << 80});
        t = execute_instruction(Instruction::make(Opcode::Push, 4), t);
        t = execute_instruction(Instruction::make(Opcode::PopTo, 0), t);
        CHECK(t.locals[0] == 17);
        CHECK(t.stack.size() == 1);
        CHECK(t.pc == 3);
    }

    TEST_CASE("POPTO on an empty stack traps without touching the state")
    {
        MachineState s;
        s.locals[2] = 5;
        auto before = s;
        try {
            execute_in_place(Instruction::make(Opcode::PopTo, 2), s);
            FAIL("expected trap");
        } catch (const Trap& t) {
            CHECK(t.kind() == TrapKind::StackUnderflow);
        }
        CHECK(s == before);
    }

    TEST_CASE("LOAD, STORE and GETELPTR use unit stride")
    {
        MachineState s(nullptr, kDefaultLocals, 4);
        s.memory = {10, 20, 30, 40};
        s.locals[0] = 1;
        s.locals[1] = 2;
        auto t = execute_instruction(Instruction::make(Opcode::GetElPtr, 2, 0, 1), s);
        CHECK(t.locals[2] == 3);
        t = execute_instruction(Instruction::make(Opcode::Load, 3, 2), t);
        CHECK(t.locals[3] == 40);
        t = execute_instruction(Instruction::make(Opcode::Store, 0, 3), t);
        CHECK(t.memory == std::vector<Word>{10, 40, 30, 40});
        t.locals[2] = 4;
        CHECK_THROWS_AS(execute_instruction(Instruction::make(Opcode::Load, 3, 2), t), Trap);
    }

    TEST_CASE("HALT sets the flag and keeps pc")
    {
        MachineState s;
        s.pc = 5;
        auto t = execute_instruction(Instruction::make(Opcode::Halt), s);
        CHECK(t.halted);
        CHECK(t.pc == 5);
    }
}

TEST_SUITE("step and run")
{
    TEST_CASE("first step of the occurrences program pushes 0")
    {
        auto s = step(concrete_state());
        CHECK(s.stack == std::vector<Word>{0});
        CHECK(s.pc == 1);
    }

    TEST_CASE("stepping a halted state is the identity")
    {
        auto s = concrete_state();
        s.pc = 22;
        s.halted = true;
        CHECK(step(s) == s);
        CHECK(run(s, 50) == s);
    }

    TEST_CASE("step past the program traps")
    {
        auto s = concrete_state();
        s.pc = s.program->size();
        try {
            step_in_place(s);
            FAIL("expected trap");
        } catch (const Trap& t) {
            CHECK(t.kind() == TrapKind::PcOutOfRange);
        }
    }

    TEST_CASE("113 steps reach the HALT with three occurrences counted")
    {
        auto s = run(concrete_state(), 113);
        CHECK(s.pc == 22);
        CHECK(s.program->instructions[22].op == Opcode::Halt);
        CHECK(read_local(s, 6) == 3);
        REQUIRE(!s.stack.empty());
        CHECK(s.stack.back() == 3);
    }

    TEST_CASE("running longer than needed is absorbed by HALT")
    {
        auto a = run(concrete_state(), 113);
        auto b = run(concrete_state(), 200);
        CHECK(a.locals == b.locals);
        CHECK(a.stack == b.stack);
        CHECK(b.halted);
        CHECK(b.pc == 22);
    }

    TEST_CASE("run zero steps is the identity")
    {
        auto s = concrete_state();
        CHECK(run(s, 0) == s);
    }

    TEST_CASE("run_to_halt counts preamble, iterations and the final push")
    {
        // 8 preamble instructions (pcs 0-7), 13 per loop iteration (pcs 8-20),
        // then PUSH at pc 21; the HALT itself is not counted.
        const std::uint64_t expected = 8 + 8 * 13 + 1;
        auto r = run_to_halt(concrete_state(), 1'000'000);
        CHECK(r.status == RunStatus::Halted);
        CHECK(r.steps == expected);
        CHECK(r.steps == 113);
        CHECK(r.state == run(concrete_state(), 113));
    }

    TEST_CASE("run_to_halt on an already halted state takes zero steps")
    {
        auto s = run(concrete_state(), 200);
        auto r = run_to_halt(s, 10);
        CHECK(r.steps == 0);
        CHECK(r.state == s);
    }

    TEST_CASE("n = 0 skips the loop via the branch at pc 7")
    {
        MachineState s(reference_program());
        s.locals[1] = 0;
        s.locals[2] = 399;
        s = run(s, 8);
        CHECK(s.pc == 21);
        auto r = run_to_halt(s, 100);
        CHECK(r.steps == 1);
        CHECK(r.state.stack.back() == 0);
    }

    TEST_CASE("budget exhaustion is reported, not thrown")
    {
        auto r = run_to_halt(concrete_state(), 50);
        CHECK(r.status == RunStatus::BudgetExhausted);
        CHECK(r.steps == 50);
    }

    TEST_CASE("traps during run report the step index")
    {
        auto s = concrete_state();
        s.memory.resize(104);
        try {
            run_in_place(s, 200);
            FAIL("expected trap");
        } catch (const Trap& t) {
            CHECK(t.kind() == TrapKind::MemoryOutOfRange);
            CHECK(t.pc() == 9);
            REQUIRE(t.step_index().has_value());
            // Four complete iterations, then GETELPTR of the fifth.
            CHECK(*t.step_index() == 8 + 4 * 13 + 1);
        }
    }
}

TEST_SUITE("interpreter properties")
{
    void require_ok(const ll2::test::PropertyResult& r, std::size_t min_cases)
    {
        INFO(r.first_failure);
        CHECK(r.ok());
        CHECK(r.cases >= min_cases);
    }

    TEST_CASE("step is deterministic") { require_ok(ll2::test::check_determinism(1, 3000), 3000); }

    TEST_CASE("a step changes only what its opcode writes") { require_ok(ll2::test::check_frame(2, 3000), 3000); }

    TEST_CASE("stack depth follows the opcode") { require_ok(ll2::test::check_stack_discipline(3, 3000), 3000); }

    TEST_CASE("run composes over step counts") { require_ok(ll2::test::check_run_composition(4, 3000), 3000); }

    TEST_CASE("halted states are fixed points") { require_ok(ll2::test::check_halt_absorption(5, 3000), 3000); }
}
