union bits { float f; int i; char b[4]; };

int floatBits(float f) {
  union bits u;
  u.f = f;
  return u.i;
}

int lowByte(int v) {
  union bits u;
  u.i = v;
  return u.b[0] & 255;
}

int main() {
  print_int(floatBits(1.0f));
  print_int(floatBits(-2.5f));
  print_int(lowByte(0x12345678));
  print_int(lowByte(-1));
  return 0;
}
