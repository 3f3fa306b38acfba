int stack[16];
int sp = 0;

void push(int v) { stack[sp++] = v; }
int pop() { return stack[--sp]; }

int eval(int *code, int n) {
  int pc;
  for (pc = 0; pc < n; pc++) {
    int op = code[pc];
    if (op >= 0) {
      push(op);
    } else {
      int b = pop();
      int a = pop();
      if (op == -1) push(a + b);
      else if (op == -2) push(a - b);
      else push(a * b);
    }
  }
  return pop();
}

int main() {
  int prog[7] = {3, 4, -1, 5, -3, 2, -2};
  print_int(eval(prog, 7));
  return 0;
}
