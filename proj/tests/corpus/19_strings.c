int slen(char *s) {
  int n = 0;
  while (s[n] != 0) n++;
  return n;
}

void puts2(char *s) {
  int i;
  for (i = 0; s[i]; i++) putchar(s[i]);
  putchar(10);
}

void upper(char *s) {
  int i;
  for (i = 0; s[i]; i++)
    if (s[i] >= 'a' && s[i] <= 'z') s[i] = s[i] - 32;
}

int main() {
  char msg[12] = {'h', 'e', 'l', 'l', 'o', ' ', 'w', 'o', 'r', 'l', 'd', 0};
  print_int(slen(msg));
  puts2(msg);
  upper(msg);
  puts2(msg);
  return 0;
}
