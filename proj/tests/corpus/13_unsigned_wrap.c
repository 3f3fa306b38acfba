unsigned mix(unsigned h, unsigned v) {
  h ^= v;
  h *= 16777619u;
  h = (h << 5) | (h >> 27);
  return h;
}

int main() {
  unsigned h = 2166136261u;
  int i;
  for (i = 0; i < 20; i++) h = mix(h, (unsigned)i);
  print_int((long)h);
  print_int((long)(h >> 16));
  return 0;
}
